"""Word lattices and bigram language models.

Lattice files hold one hypothesis per line: ``start end word acoustic_logp``.
Bigram files hold ``w1 w2 logp`` lines, with ``<s>`` as the begin marker.
All log-probabilities are natural logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BEGIN_MARKER = "<s>"
DEFAULT_FLOOR_LOGP = -20.0


class LatticeError(ValueError):
    pass


class UnknownBigramError(KeyError):
    pass


@dataclass(frozen=True, order=True)
class WordHypothesis:
    start: int
    end: int
    key: str
    acoustic_logp: float = field(compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise LatticeError(f"bad span [{self.start}, {self.end}] for {self.key!r}")
        if self.acoustic_logp > 0:
            raise LatticeError(f"positive log-probability for {self.key!r}")

    @property
    def frames(self) -> int:
        return self.end - self.start

    @property
    def ident(self) -> tuple[int, int, str]:
        return (self.start, self.end, self.key)


@dataclass(frozen=True)
class Lattice:
    hypotheses: tuple[WordHypothesis, ...]

    @property
    def final_time(self) -> int:
        return max((h.end for h in self.hypotheses), default=0)

    def __len__(self) -> int:
        return len(self.hypotheses)

    def __iter__(self):
        return iter(self.hypotheses)

    @property
    def words(self) -> list[str]:
        return sorted({h.key for h in self.hypotheses})

    def to_text(self) -> str:
        return "".join(
            f"{h.start} {h.end} {h.key} {h.acoustic_logp!r}\n" for h in self.hypotheses
        )


def make_lattice(hyps) -> Lattice:
    """Build a lattice, merging duplicate (start, end, key) triples by max score."""
    best: dict[tuple[int, int, str], WordHypothesis] = {}
    for h in hyps:
        old = best.get(h.ident)
        if old is None or h.acoustic_logp > old.acoustic_logp:
            best[h.ident] = h
    return Lattice(tuple(sorted(best.values())))


def parse_lattice(text: str) -> Lattice:
    hyps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise LatticeError(f"line {lineno}: expected 'start end word logp'")
        try:
            start, end, logp = int(parts[0]), int(parts[1]), float(parts[3])
        except ValueError as exc:
            raise LatticeError(f"line {lineno}: {exc}") from None
        try:
            hyps.append(WordHypothesis(start, end, parts[2], logp))
        except LatticeError as exc:
            raise LatticeError(f"line {lineno}: {exc}") from None
    if hyps and min(h.start for h in hyps) != 0:
        raise LatticeError("no hypothesis starts at frame 0")
    return make_lattice(hyps)


@dataclass
class BigramModel:
    probs: dict[tuple[str, str], float]
    floor_logp: float = DEFAULT_FLOOR_LOGP
    strict: bool = False
    begin_marker: str = BEGIN_MARKER

    def logprob(self, prev: str, word: str) -> float:
        try:
            return self.probs[prev, word]
        except KeyError:
            if self.strict:
                raise UnknownBigramError((prev, word)) from None
            return self.floor_logp

    def to_text(self) -> str:
        return "".join(f"{a} {b} {p!r}\n" for (a, b), p in sorted(self.probs.items()))


def parse_bigram(text: str, floor_logp: float = DEFAULT_FLOOR_LOGP, strict: bool = False) -> BigramModel:
    probs: dict[tuple[str, str], float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise LatticeError(f"line {lineno}: expected 'w1 w2 logp'")
        try:
            logp = float(parts[2])
        except ValueError as exc:
            raise LatticeError(f"line {lineno}: {exc}") from None
        if logp > 0:
            raise LatticeError(f"line {lineno}: positive log-probability")
        if parts[1] == BEGIN_MARKER:
            raise LatticeError(f"line {lineno}: begin marker cannot follow a word")
        probs[parts[0], parts[1]] = logp
    return BigramModel(probs, floor_logp=floor_logp, strict=strict)


def bigram_logprob(m: BigramModel, prev: str, word: str) -> float:
    return m.logprob(prev, word)
