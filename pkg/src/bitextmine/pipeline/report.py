"""Run report, recounted from the persisted artifacts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..core import atomic_output


@dataclass(frozen=True)
class PipelineReport:
    domains_processed: int
    documents_fetched: int
    documents_failed: int
    document_pairs: int
    raw_pairs: int
    heuristic: dict
    filtered_pairs: int
    rejected_pairs: int
    heuristic_removal_pct: float
    classifier_removal_pct: float
    total_removal_pct: float
    stage_seconds: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)

    def render(self) -> str:
        h = self.heuristic
        lines = [
            "bitext mining report",
            "====================",
            f"domains processed      {self.domains_processed}",
            f"documents fetched      {self.documents_fetched} ({self.documents_failed} failed)",
            f"document pairs         {self.document_pairs}",
            f"raw sentence pairs     {self.raw_pairs}",
            f"  duplicates removed   {h['removed_duplicate']}",
            f"  short removed        {h['removed_short']}",
            f"  overlap removed      {h['removed_overlap']}",
            f"after heuristic rules  {h['kept']}  (-{self.heuristic_removal_pct:.2f}%)",
            f"classifier accepted    {self.filtered_pairs}",
            f"classifier rejected    {self.rejected_pairs}  (-{self.classifier_removal_pct:.2f}%)",
            f"overall removal        {self.total_removal_pct:.2f}%",
        ]
        if self.stage_seconds:
            lines.append("")
            lines.append("stage timings (s)")
            lines.extend(f"  {k:<14} {v:.3f}" for k, v in self.stage_seconds.items())
        return "\n".join(lines) + "\n"


def pct(removed: int, total: int) -> float:
    return round(100.0 * removed / total, 2) if total else 0.0


def count_lines(path) -> int:
    with open(path, encoding="utf-8") as fh:
        return sum(1 for line in fh if line.strip())


def build_report(config, timings=None) -> PipelineReport:
    from .stages import STAGES, artifact

    domains, fetched, failed = set(), 0, 0
    with open(artifact(config, "documents"), encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            o = json.loads(line)
            if o["fetch_status"] == "failed":
                failed += 1
            else:
                fetched += 1
                domains.add(o["domain"])
    with open(artifact(config, "rules"), encoding="utf-8") as fh:
        rules = json.load(fh)
    raw = count_lines(artifact(config, "raw"))
    kept = count_lines(artifact(config, "heuristic"))
    filtered = count_lines(artifact(config, "filtered"))
    rejected = count_lines(artifact(config, "rejected"))
    timings = timings or {}
    return PipelineReport(
        domains_processed=len(domains),
        documents_fetched=fetched,
        documents_failed=failed,
        document_pairs=count_lines(artifact(config, "doc_pairs")),
        raw_pairs=raw,
        heuristic=rules,
        filtered_pairs=filtered,
        rejected_pairs=rejected,
        heuristic_removal_pct=pct(raw - kept, raw),
        classifier_removal_pct=pct(rejected, kept),
        total_removal_pct=pct(raw - filtered, raw),
        stage_seconds={k: timings[k] for k in STAGES if k in timings},
    )


def write_report(report: PipelineReport, json_path, text_path) -> None:
    with atomic_output(json_path) as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with atomic_output(text_path) as fh:
        fh.write(report.render())
