"""Seeded generators for random grammars, lattices and bigram models."""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict

from .grammar import Grammar, parse_grammar
from .lattice import BEGIN_MARKER, BigramModel, Lattice, WordHypothesis, make_lattice

RANDOM_CFG_SEED = 20


def random_grammar_text(
    rng: random.Random,
    n_rules: int = 20,
    n_nonterminals: int = 6,
    n_terminals: int = 4,
    n_words: int = 6,
) -> str:
    """A cycle-free CFG without empty rules.

    Unit rules only point to nonterminals of higher index, and the first rule
    of every nonterminal uses terminals and higher-index nonterminals only, so
    every nonterminal is productive.
    """
    nts = ["S"] + [f"X{i}" for i in range(1, n_nonterminals)]
    ts = [f"t{i}" for i in range(n_terminals)]
    rules: list[tuple[str, list[str]]] = []

    def pick(i: int, forward_only: bool) -> str:
        pool = ts + (nts[i + 1 :] if forward_only else nts)
        return rng.choice(pool)

    for i, head in enumerate(nts):
        length = rng.randint(1, 3)
        rules.append((head, [pick(i, True) for _ in range(length)]))
    while len(rules) < n_rules:
        i = rng.randrange(len(nts))
        length = rng.randint(1, 3)
        rhs = [pick(i, length == 1) for _ in range(length)]
        if (nts[i], rhs) not in rules:
            rules.append((nts[i], rhs))

    lines = [f"{h} -> {' '.join(rhs)}" for h, rhs in rules]
    words = [f"w{i}" for i in range(n_words)]
    lex = set()
    for k, t in enumerate(ts):
        lex.add((t, words[k % n_words]))
    for w in words:
        for t in rng.sample(ts, rng.randint(1, 2)):
            lex.add((t, w))
    lines += [f"lex {t} {w}" for t, w in sorted(lex)]
    return "\n".join(lines) + "\n"


def random_cfg(seed: int = RANDOM_CFG_SEED) -> Grammar:
    return parse_grammar(random_grammar_text(random.Random(seed)))


def words_by_category(g: Grammar) -> dict[str, list[str]]:
    out = defaultdict(list)
    for w in sorted(g.lexicon):
        for c in g.lexicon[w]:
            out[c.name].append(w)
    return out


def sample_categories(g: Grammar, rng: random.Random, max_len: int, tries: int = 200) -> list[str] | None:
    """Categories of a random derivation from the start symbol, or None."""
    by_head = defaultdict(list)
    for r in g.rules:
        by_head[r.head.name].append([s for s in r.rhs])

    class TooLong(Exception):
        pass

    def expand(sym, out, depth):
        if sym.is_terminal:
            out.append(sym.name)
            if len(out) > max_len:
                raise TooLong
            return
        if depth > 12:
            raise TooLong
        for s in rng.choice(by_head[sym.name]):
            expand(s, out, depth + 1)

    for _ in range(tries):
        out: list[str] = []
        try:
            expand(g.start, out, 0)
        except (TooLong, RecursionError):
            continue
        if out:
            return out
    return None


def random_bigram(words, rng: random.Random, keep: float = 0.8, floor_logp: float = -20.0) -> BigramModel:
    probs = {}
    for a in [BEGIN_MARKER] + sorted(words):
        for b in sorted(words):
            if rng.random() < keep:
                probs[a, b] = math.log(rng.uniform(0.01, 1.0))
    return BigramModel(probs, floor_logp=floor_logp)


def random_instance(
    g: Grammar,
    rng: random.Random,
    max_hyps: int = 10,
    max_frames: int = 8,
    p_sentence: float = 0.7,
) -> tuple[Lattice, BigramModel]:
    """A small lattice, often seeded with one grammatical path, plus a bigram."""
    frames = rng.randint(1, max_frames)
    lexical = words_by_category(g)
    vocab = sorted(g.lexicon)
    hyps: list[WordHypothesis] = []

    def score(n):
        return -round(rng.uniform(0.2, 4.0) * n, 6)

    if rng.random() < p_sentence:
        cats = sample_categories(g, rng, min(frames, max_hyps))
        if cats and all(lexical.get(c) for c in cats):
            if len(cats) > frames:
                frames = len(cats)
            cuts = [0] + sorted(rng.sample(range(1, frames), len(cats) - 1)) + [frames]
            for c, s, e in zip(cats, cuts, cuts[1:]):
                hyps.append(WordHypothesis(s, e, rng.choice(lexical[c]), score(e - s)))
    target = rng.randint(max(1, len(hyps)), max_hyps)
    while len(hyps) < target:
        s = rng.randrange(frames)
        e = rng.randint(s + 1, frames)
        hyps.append(WordHypothesis(s, e, rng.choice(vocab), score(e - s)))
    lattice = make_lattice(hyps)
    return lattice, random_bigram(vocab, rng)


# ---------------------------------------------------------------------------
# larger synthetic workloads


def synthetic_grammar_text(
    rng: random.Random, n_rules: int = 220, words_per_tag: tuple[int, int] = (3, 6)
) -> str:
    """A layered phrase-structure grammar with ``n_rules`` rules.

    Phrase types are split into variants (NP3, VP7, ...) so the rule count
    grows without making every sentence wildly ambiguous.
    """
    pos = ["det", "n", "adj", "v", "p", "adv", "pron", "conj", "aux"]
    words = {
        t: [f"{t}{i}" for i in range(rng.randint(*words_per_tag))] for t in pos
    }
    rules: list[tuple[str, tuple[str, ...]]] = []
    n_var = max(2, n_rules // 40)
    nps = [f"NP{i}" for i in range(n_var)]
    vps = [f"VP{i}" for i in range(n_var)]
    pps = [f"PP{i}" for i in range(n_var)]
    aps = [f"AP{i}" for i in range(n_var)]
    ss = [f"S{i}" for i in range(n_var)]
    for s in ss:
        rules.append(("S", (s,)))

    def add(head, rhs):
        if (head, rhs) not in rules:
            rules.append((head, rhs))

    for i in range(n_var):
        add(aps[i], ("adj",))
        add(aps[i], ("adv", "adj"))
        add(nps[i], ("det", "n"))
        add(nps[i], ("pron",))
        add(nps[i], ("det", aps[i], "n"))
        add(pps[i], ("p", nps[i]))
        add(vps[i], ("v", nps[i]))
        add(vps[i], ("v",))
        add(ss[i], (nps[i], vps[i]))
    while len(rules) < n_rules:
        i = rng.randrange(n_var)
        j = rng.randrange(n_var)
        choice = rng.randrange(8)
        if choice == 0:
            add(nps[i], ("det", rng.choice(aps), "n", rng.choice(pps)))
        elif choice == 1:
            add(vps[i], ("v", rng.choice(nps), rng.choice(pps)))
        elif choice == 2:
            add(vps[i], ("aux", "v", rng.choice(nps)))
        elif choice == 3:
            add(ss[i], (rng.choice(nps), "aux", vps[j]))
        elif choice == 4:
            add(vps[i], ("adv", vps[j]) if j > i else ("v", "adv"))
        elif choice == 5:
            add(nps[i], ("det", "n", "conj", "n"))
        elif choice == 6:
            add(ss[i], (rng.choice(pps), nps[j], vps[i]))
        else:
            add(pps[i], ("p", "det", rng.choice(aps), "n"))
    lines = [f"{h} -> {' '.join(rhs)}" for h, rhs in rules]
    lines.insert(0, "start S")
    for t, ws in words.items():
        lines += [f"lex {t} {w}" for w in ws]
    return "\n".join(lines) + "\n"


def train_bigram(sentences, vocab, alpha: float = 0.1) -> BigramModel:
    """Add-alpha bigram estimates over ``vocab`` with a begin marker."""
    counts = Counter()
    history = Counter()
    for sent in sentences:
        prev = BEGIN_MARKER
        for w in sent:
            counts[prev, w] += 1
            history[prev] += 1
            prev = w
    vocab = sorted(vocab)
    probs = {}
    for a in [BEGIN_MARKER] + vocab:
        denom = history[a] + alpha * len(vocab)
        for b in vocab:
            probs[a, b] = math.log((counts[a, b] + alpha) / denom)
    return BigramModel(probs)


def bigram_perplexity(m: BigramModel, sentences) -> float:
    total, n = 0.0, 0
    for sent in sentences:
        prev = BEGIN_MARKER
        for w in sent:
            total += m.logprob(prev, w)
            prev = w
            n += 1
    return math.exp(-total / n)


def sample_sentence(g: Grammar, rng: random.Random, max_len: int = 12) -> list[str] | None:
    cats = sample_categories(g, rng, max_len)
    if cats is None:
        return None
    lexical = words_by_category(g)
    return [rng.choice(lexical[c]) for c in cats]


def speech_lattice(
    sentence: list[str],
    vocab: list[str],
    rng: random.Random,
    n_hyps: int,
    frame_range: tuple[int, int] = (3, 9),
) -> Lattice:
    """A recognizer-style lattice around a spoken ``sentence``.

    The true words get per-frame acoustic scores around -1; competitors are
    placed near the true word boundaries and score somewhat worse.
    """
    bounds = [0]
    for _ in sentence:
        bounds.append(bounds[-1] + rng.randint(*frame_range))
    final = bounds[-1]
    hyps = [
        WordHypothesis(s, e, w, -round(rng.uniform(0.8, 1.4) * (e - s), 4))
        for w, s, e in zip(sentence, bounds, bounds[1:])
    ]
    seen = {h.ident for h in hyps}
    while len(hyps) < n_hyps:
        i = rng.randrange(len(sentence))
        k = min(len(sentence), i + rng.choice([1, 1, 1, 2]))
        s = max(0, bounds[i] + rng.choice([0, 0, 0, -1, 1]))
        e = min(final, bounds[k] + rng.choice([0, 0, 0, -1, 1]))
        if e <= s:
            continue
        w = rng.choice(vocab)
        if (s, e, w) in seen:
            continue
        seen.add((s, e, w))
        hyps.append(WordHypothesis(s, e, w, -round(rng.uniform(1.2, 2.6) * (e - s), 4)))
    return make_lattice(hyps)
