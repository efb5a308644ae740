"""Frame-synchronous beam search over the parser agenda, with best-first recovery.

Search and NewHypo actions live on a stack that always runs first.  Shift
actions are grouped by the time of the vertex they lead to; within the
earliest pending frame each is scored by the outside evaluation of the
link it would build, and only those within ``beam_width`` of the frame's
best score run.  The rest are parked on a max-heap.  If the beam pass ends
without a parse, parked actions are popped best-first, each followed by a
fresh beam pass over whatever it triggers.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from .engine import Engine, ParseConfig, ParseResult, Strategy
from .grammar import Grammar, SlrTable
from .gss import Action, ShiftAction
from .lattice import BigramModel, Lattice
from .scoring import Scorer

# scores reached along different summation orders differ in the last bits
TIE_EPS = 1e-9


@dataclass
class BeamConfig:
    beam_width: float = math.inf
    max_recovered: float = math.inf

    def __post_init__(self):
        if not self.beam_width >= 0:
            raise ValueError("beam width must be nonnegative")
        if not self.max_recovered >= 0:
            raise ValueError("max_recovered must be nonnegative")


class PrunedAgenda:
    """Max-priority store of deferred shifts keyed by their outside score."""

    def __init__(self):
        self._heap: list[tuple[float, tuple, int, ShiftAction]] = []
        self._tick = itertools.count()

    def push(self, score: float, action: ShiftAction) -> None:
        heapq.heappush(self._heap, (-score, action.sort_key, next(self._tick), action))

    def pop(self) -> tuple[float, ShiftAction]:
        neg, _, _, action = heapq.heappop(self._heap)
        return -neg, action

    def __len__(self) -> int:
        return len(self._heap)


class BeamStrategy(Strategy):
    def __init__(self, cfg: BeamConfig | None = None, scorer: Scorer | None = None):
        self.cfg = cfg or BeamConfig()
        self.scorer = scorer
        self.stack: list[Action] = []
        self.frames: dict[int, list[ShiftAction]] = {}
        self.frame_heap: list[int] = []
        self.frame_best: dict[int, float] = {}
        self.pruned = PrunedAgenda()
        self.stage = 1
        self.pruned_count = 0
        self.recovered = 0
        self.budget_exhausted = False

    def add(self, action: Action, engine: Engine) -> None:
        if self.scorer is None:
            self.scorer = Scorer(engine.bigram, engine.config.lam).attach(engine.state)
        if isinstance(action, ShiftAction):
            bucket = self.frames.get(action.time)
            if bucket is None:
                bucket = self.frames[action.time] = []
                heapq.heappush(self.frame_heap, action.time)
            bucket.append(action)
        else:
            self.stack.append(action)

    def next(self, engine: Engine) -> Action | None:
        if self.stack:
            return self.stack.pop()
        action = self._next_shift()
        if action is not None:
            return action
        if engine.accepted or not len(self.pruned):
            return None
        if self.recovered >= self.cfg.max_recovered:
            self.budget_exhausted = True
            return None
        self.stage = 2
        self.recovered += 1
        self.frame_best.clear()
        return self._pop_pruned()

    def _next_shift(self) -> ShiftAction | None:
        width = self.cfg.beam_width
        while self.frame_heap:
            t = self.frame_heap[0]
            bucket = self.frames[t]
            if not bucket:
                heapq.heappop(self.frame_heap)
                del self.frames[t]
                continue
            scored = [(self.scorer.shift_score(a), a) for a in bucket]
            best = max(self.frame_best.get(t, -math.inf), max(s for s, _ in scored))
            self.frame_best[t] = best
            floor = best - width - TIE_EPS
            keep = []
            for s, a in scored:
                if s >= floor:
                    keep.append((s, a))
                else:
                    self.pruned.push(s, a)
                    self.pruned_count += 1
            if not keep:
                bucket.clear()
                continue
            s, chosen = min(keep, key=lambda sa: (-sa[0], sa[1].sort_key))
            bucket[:] = [a for _, a in keep if a is not chosen]
            return chosen
        return None

    def _pop_pruned(self) -> ShiftAction:
        # Scores can only rise as contexts grow; re-queue stale ones.
        while True:
            stored, action = self.pruned.pop()
            now = self.scorer.shift_score(action)
            if now > stored + TIE_EPS and len(self.pruned):
                self.pruned.push(now, action)
                continue
            return action

    def stats(self) -> dict[str, int]:
        return {
            "beam.pruned": self.pruned_count,
            "beam.recovered": self.recovered,
            "beam.pruned_left": len(self.pruned),
            "beam.stage": self.stage,
        }


def beam_strategy(cfg: BeamConfig | None = None) -> BeamStrategy:
    return BeamStrategy(cfg)


def run_two_stage(
    grammar: Grammar,
    table: SlrTable,
    lattice: Lattice,
    bigram: BigramModel,
    config: ParseConfig | None = None,
    beam: BeamConfig | None = None,
) -> ParseResult:
    """Beam pass to agenda exhaustion, then best-first recovery if unparsed."""
    if config is None:
        config = ParseConfig(stop_at_accept=True)
    strategy = BeamStrategy(beam)
    engine = Engine(grammar, table, lattice, strategy, config, bigram)
    strategy.scorer = Scorer(bigram, config.lam).attach(engine.state)
    result = engine.run()
    result.budget_exhausted = result.budget_exhausted or strategy.budget_exhausted
    return result
