"""Curated table of externally sourced rank facts.

The shipped table is a flat text file of (D, family, rank, citation) rows.
Facts are consulted only when a caller explicitly opts in, and anything
derived from them stays flagged as external all the way into reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .numtheory import is_squarefree

_BUNDLED = "external_facts.txt"


@dataclass(frozen=True)
class ExternalRankFact:
    D: int
    family: str
    rank: int
    citation: str


def parse_fact_table(text: str) -> list[ExternalRankFact]:
    facts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"fact table line {lineno}: expected 4 columns, got {len(parts)}")
        D, family, rank, citation = int(parts[0]), parts[1], int(parts[2]), parts[3]
        if not is_squarefree(D):
            raise ValueError(f"fact table line {lineno}: D = {D} is not squarefree")
        if rank < 0:
            raise ValueError(f"fact table line {lineno}: negative rank")
        facts.append(ExternalRankFact(D, family, rank, citation))
    return facts


def load_fact_table(path: str | Path | None = None) -> list[ExternalRankFact]:
    """Load facts from `path`, or the bundled table when path is None."""
    if path is None:
        text = resources.files(__package__).joinpath(_BUNDLED).read_text()
    else:
        text = Path(path).read_text()
    return parse_fact_table(text)


def lookup_fact(D: int, family: str, facts=None) -> ExternalRankFact | None:
    if facts is None:
        facts = load_fact_table()
    for fact in facts:
        if fact.D == D and fact.family == family:
            return fact
    return None
