"""Stage orchestration, configuration, synthetic fixtures and evaluation."""

from .config import (ConfigError, CrawlParams, DictParams, DocAlignParams, FilterParams, PipelineConfig,
                     derive_seed, dump_config, load_config, validate)
from .evaluate import Scores, evaluate_against_truth
from .fixture import STANDARD_SPEC, Fixture, SyntheticFixtureSpec, cipher_corpus, gen_fixture
from .report import PipelineReport, build_report
from .stages import FILES, STAGES, StageError, artifact, run_pipeline, run_stage
