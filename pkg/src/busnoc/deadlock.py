"""Per-output-channel inactivity counters and the deadlock presumption test.

Each output physical channel counts consecutive idle cycles; a flit crossing
resets the count. The threshold test reads a single bit (bit k for threshold
T = 2**k), so counters saturate at 2**(k+1) - 1 instead of wrapping: a wrap
would clear the flag and un-detect a live deadlock.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(slots=True)
class InactivityCounter:
    threshold_log2: int
    value: int = 0

    @property
    def saturation(self) -> int:
        return (1 << (self.threshold_log2 + 1)) - 1

    def tick(self) -> None:
        if self.value < self.saturation:
            self.value += 1

    def reset(self) -> None:
        self.value = 0

    def flag(self) -> bool:
        """Bit k of the count; equivalent to value >= 2**k under
        monotone counting with reset."""
        return bool(self.value & (1 << self.threshold_log2))


def presume_deadlock(
    requested: Iterable["OutputView"],
) -> bool:
    """True iff every output the blocked header requested is reserved by
    another message and has its inactivity flag set.

    Evaluated only for Header flits at FIFO heads; body/tail flits follow
    reservations and never trigger detection.
    """
    empty = True
    for out in requested:
        empty = False
        if not out.busy or not out.counter.flag():
            return False
    return not empty


@dataclass(slots=True)
class OutputView:
    """The slice of an output port that detection needs."""

    busy: bool
    counter: InactivityCounter
