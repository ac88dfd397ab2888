"""Named runtime invariant counters shared by algorithms, metrics and harness."""

from __future__ import annotations

from collections import Counter

from .errors import InvariantViolation

TELESCOPING = "telescoping"
NEGATIVE_DELTA = "negative-delta"
RATE_MONOTONE = "rate-monotone"
STABILITY = "stability"
IN_BOX = "in-box"
HEDGE_FEASIBLE = "hedge-feasible"
DGAP_DECOMPOSITION = "dgap-decomposition"
NEREG_DOMINATION = "nereg-domination"
DGAP_NONNEGATIVE = "dgap-nonnegative"


class InvariantLog:
    """Counts violations by name; raises immediately when ``strict``."""

    def __init__(self, strict: bool = False):
        self.strict = strict
        self.counts: Counter = Counter()
        self.first_round: dict = {}
        self.details: dict = {}

    def check(self, name: str, ok: bool, t: int, detail="") -> bool:
        """Record a breach of ``name`` at round ``t`` unless ``ok``.

        ``detail`` may be a string or a zero-argument callable; callables
        are only evaluated on failure, keeping the passing path cheap.
        """
        if ok:
            return True
        if callable(detail):
            detail = detail()
        self.counts[name] += 1
        if name not in self.first_round:
            self.first_round[name] = t
            self.details[name] = detail
        if self.strict:
            raise InvariantViolation(name, t, detail)
        return False

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "InvariantLog") -> None:
        self.counts.update(other.counts)
        for k, v in other.first_round.items():
            if k not in self.first_round or v < self.first_round[k]:
                self.first_round[k] = v
                self.details[k] = other.details.get(k, "")

    def summary(self) -> dict:
        return {k: {"count": c, "first_round": self.first_round[k]} for k, c in sorted(self.counts.items())}
