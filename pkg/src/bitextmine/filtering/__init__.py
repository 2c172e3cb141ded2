"""Corpus filtering: heuristic rules followed by a random-forest parallel/non-parallel classifier."""

from .classify import classify_corpus, score_corpus
from .features import FEATURE_NAMES, N_FEATURES, FeatureVector, extract_features, feature_matrix, gen_negatives
from .forest import ForestModel, Tree, load_model, loads_model, dumps_model, save_model, score_pair, train_forest
from .rules import Reason, RuleReport, heuristic_filter, overlap_ratio, write_removed
