"""Alternating automata over {0, 1} with positive boolean transition formulas.

Acceptance follows the two-player game: on a conjunction Eve picks the branch,
on a disjunction Alice does, and Alice wins when the state reached after the
last symbol is accepting.  It is computed by the equivalent backward recursion

    Acc(s, eps)  = s in accepting
    Acc(s, a.w)  = evaluate(delta(s, a), t -> Acc(t, w))

Interchange format (one directive per line, ``#`` starts a comment)::

    states s0 s1 s2 s3
    start s0
    accept s2 s3
    delta s0 0 = atom s1
    delta s0 1 = or(atom s1, and(atom s2, atom s3))

``and``/``or`` accept two or more arguments; more than two are right-folded.
Every (state, symbol) pair needs exactly one ``delta`` line.
"""
from __future__ import annotations

import random
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from . import config
from .errors import BudgetExceededError, MalformedAutomatonError
from .words import BitWord

SYMBOLS = (0, 1)


@dataclass(frozen=True, slots=True)
class Atom:
    state: str


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Atom | And | Or


def _fold(cls, parts):
    parts = list(parts)
    if not parts:
        raise MalformedAutomatonError(f"{cls.__name__} needs at least one operand")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(p, out)
    return out


def conj(*parts: Formula) -> Formula:
    return _fold(And, parts)


def disj(*parts: Formula) -> Formula:
    return _fold(Or, parts)


def atoms(formula: Formula) -> frozenset[str]:
    out = set()
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            out.add(f.state)
        elif isinstance(f, (And, Or)):
            stack.append(f.left)
            stack.append(f.right)
        else:
            raise MalformedAutomatonError(f"not a positive formula node: {f!r}")
    return frozenset(out)


def evaluate(formula: Formula, assignment: Mapping[str, bool]) -> bool:
    if isinstance(formula, Atom):
        try:
            return bool(assignment[formula.state])
        except KeyError:
            raise MalformedAutomatonError(f"unknown state {formula.state!r} in formula") from None
    if isinstance(formula, And):
        return evaluate(formula.left, assignment) and evaluate(formula.right, assignment)
    if isinstance(formula, Or):
        return evaluate(formula.left, assignment) or evaluate(formula.right, assignment)
    raise MalformedAutomatonError(f"not a positive formula node: {formula!r}")


def format_formula(formula: Formula) -> str:
    if isinstance(formula, Atom):
        return f"atom {formula.state}"
    name = "and" if isinstance(formula, And) else "or"
    return f"{name}({format_formula(formula.left)}, {format_formula(formula.right)})"


@dataclass(frozen=True)
class AlternatingAutomaton:
    states: tuple[str, ...]
    start: str
    accepting: frozenset[str]
    delta: Mapping[tuple[str, int], Formula]
    _atoms: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        known = set(self.states)
        if len(known) != len(self.states):
            raise MalformedAutomatonError("duplicate state identifiers")
        if self.start not in known:
            raise MalformedAutomatonError(f"start state {self.start!r} is not a state")
        if not self.accepting <= known:
            raise MalformedAutomatonError(f"accepting states {sorted(self.accepting - known)} unknown")
        table = {}
        for s in self.states:
            for a in SYMBOLS:
                if (s, a) not in self.delta:
                    raise MalformedAutomatonError(f"delta undefined on ({s!r}, {a})")
                used = atoms(self.delta[s, a])
                if not used <= known:
                    raise MalformedAutomatonError(f"delta({s!r}, {a}) references {sorted(used - known)}")
                table[s, a] = used
        extra = set(self.delta) - set(table)
        if extra:
            raise MalformedAutomatonError(f"delta defined outside states x {{0,1}}: {sorted(extra)}")
        object.__setattr__(self, "_atoms", table)

    def successors(self, state: str, symbol: int) -> frozenset[str]:
        return self._atoms[state, symbol]

    @property
    def is_deterministic(self) -> bool:
        return all(isinstance(f, Atom) for f in self.delta.values())

    @property
    def is_nondeterministic(self) -> bool:
        def pure_or(f):
            return isinstance(f, Atom) or (isinstance(f, Or) and pure_or(f.left) and pure_or(f.right))

        return all(pure_or(f) for f in self.delta.values())

    def step(self, state: str, symbol: int) -> str:
        """Successor in a deterministic automaton."""
        f = self.delta[state, symbol]
        if not isinstance(f, Atom):
            raise MalformedAutomatonError("step() needs a deterministic automaton")
        return f.state

    def run(self, word: Iterable[int], state: str | None = None) -> str:
        s = self.start if state is None else state
        for a in word:
            s = self.step(s, a)
        return s

    @classmethod
    def deterministic(cls, states, start, accepting, table: Mapping[tuple[str, int], str]):
        return cls(states, start, accepting, {k: Atom(v) for k, v in table.items()})


def accepts(aut: AlternatingAutomaton, word: BitWord | Iterable[int], state: str | None = None) -> bool:
    """Whether Alice wins the acceptance game on ``word`` starting from ``state``."""
    w = tuple(word)
    live = [{aut.start if state is None else state}]
    for a in w:
        nxt = set()
        for s in live[-1]:
            nxt |= aut.successors(s, a)
        live.append(nxt)
    value = {s: s in aut.accepting for s in live[-1]}
    for i in range(len(w) - 1, -1, -1):
        value = {s: evaluate(aut.delta[s, w[i]], value) for s in live[i]}
    return value[aut.start if state is None else state]


def acceptance_table(aut: AlternatingAutomaton, max_len: int) -> list[list[frozenset[str]]]:
    """``table[l][v]`` is the set of states from which the length-``l`` word of value ``v`` is accepted."""
    table = [[aut.accepting]]
    for length in range(1, max_len + 1):
        prev = table[-1]
        row = []
        for v in range(1 << length):
            tail = prev[v >> 1]
            assignment = {s: s in tail for s in aut.states}
            row.append(frozenset(s for s in aut.states if evaluate(aut.delta[s, v & 1], assignment)))
        table.append(row)
    return table


def reachable_census(aut: AlternatingAutomaton, depth: int) -> list[int]:
    """Counts ``c_0..c_depth`` of states live after reading some word of length ``<= k``.

    For non-deterministic and alternating automata a state is live when it
    appears as an atom of a transition formula taken from a live state.  This
    over-approximates what any single play visits and coincides with ordinary
    reachability for deterministic automata.
    """
    seen = {aut.start}
    frontier = {aut.start}
    counts = [1]
    for _ in range(depth):
        nxt = set()
        for s in frontier:
            for a in SYMBOLS:
                nxt |= aut.successors(s, a)
        frontier = nxt - seen
        seen |= frontier
        counts.append(len(seen))
    return counts


def reachable_states(aut: AlternatingAutomaton, depth: int | None = None) -> set[str]:
    seen = {aut.start}
    frontier = {aut.start}
    k = 0
    while frontier and (depth is None or k < depth):
        nxt = set()
        for s in frontier:
            for a in SYMBOLS:
                nxt |= aut.successors(s, a)
        frontier = nxt - seen
        seen |= frontier
        k += 1
    return seen


def _word_state(word: BitWord) -> str:
    return "w" + "".join(map(str, word.bits)) if len(word) else "eps"


def tree_dfa(oracle, n: int) -> AlternatingAutomaton:
    """Binary-tree DFA whose states are the words of length ``<= n`` plus a sink.

    ``oracle`` is a :class:`~qtcensus.oracles.LanguageOracle` or any callable on
    :class:`BitWord`.  The automaton agrees with the oracle on every word of
    length ``<= n``; longer words fall into the non-accepting sink.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    member = oracle.contains_word if hasattr(oracle, "contains_word") else oracle
    states, accepting, table = [], set(), {}
    for length in range(n + 1):
        for v in range(1 << length):
            w = BitWord.from_int(v, length)
            name = _word_state(w)
            states.append(name)
            if member(w):
                accepting.add(name)
            for a in SYMBOLS:
                table[name, a] = _word_state(w + BitWord((a,))) if length < n else "sink"
    states.append("sink")
    table["sink", 0] = table["sink", 1] = "sink"
    return AlternatingAutomaton.deterministic(states, "eps", accepting, table)


@dataclass(frozen=True)
class ResidualReport:
    prefix_len: int
    suffix_depth: int
    distinct_count: int

    def to_dict(self):
        return {"prefixLen": self.prefix_len, "suffixDepth": self.suffix_depth, "distinctCount": self.distinct_count}


def residual_count(oracle, n: int, d: int, cap: int | None = None) -> ResidualReport:
    """Classes of prefixes ``|u| <= n`` that no suffix ``|v| <= d`` distinguishes.

    A lower bound on the number of states of any DFA for the language that are
    reachable within ``n`` steps.
    """
    if n < 0 or d < 0:
        raise ValueError("n and d must be >= 0")
    cap = config.cap("work_cap") if cap is None else cap
    work = (1 << (n + 1)) * (1 << (d + 1))
    if work > cap:
        raise BudgetExceededError(f"residual enumeration of {work} queries exceeds cap {cap}")
    table = oracle.word_table(n + d)
    signatures = set()
    for length in range(n + 1):
        for v in range(1 << length):
            sig = tuple(
                table[length + m][v + (s << length)] for m in range(d + 1) for s in range(1 << m)
            )
            signatures.add(sig)
    return ResidualReport(n, d, len(signatures))


# ---------------------------------------------------------------- generators


def random_dfa(rng: random.Random, n_states: int, p_accept: float = 0.5) -> AlternatingAutomaton:
    states = [f"q{i}" for i in range(n_states)]
    table = {(s, a): rng.choice(states) for s in states for a in SYMBOLS}
    accepting = {s for s in states if rng.random() < p_accept}
    return AlternatingAutomaton.deterministic(states, states[0], accepting, table)


def random_formula(rng: random.Random, states, max_atoms: int = 3) -> Formula:
    k = rng.randint(1, max_atoms)
    parts: list[Formula] = [Atom(rng.choice(states)) for _ in range(k)]
    while len(parts) > 1:
        i = rng.randrange(len(parts) - 1)
        op = And if rng.random() < 0.5 else Or
        parts[i : i + 2] = [op(parts[i], parts[i + 1])]
    return parts[0]


def random_alternating(rng: random.Random, n_states: int, max_atoms: int = 3) -> AlternatingAutomaton:
    states = [f"q{i}" for i in range(n_states)]
    delta = {(s, a): random_formula(rng, states, max_atoms) for s in states for a in SYMBOLS}
    accepting = {s for s in states if rng.random() < 0.5}
    return AlternatingAutomaton(states, states[0], accepting, delta)


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"\s*(?:(?P<punct>[(),])|(?P<name>[A-Za-z0-9_.:\-]+))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedAutomatonError(f"bad formula syntax at {text[pos:]!r}")
        out.append(m.group("punct") or m.group("name"))
        pos = m.end()
    return out


def parse_formula(text: str) -> Formula:
    tokens = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            raise MalformedAutomatonError(f"expected {tok!r} in formula {text!r}")
        pos += 1

    def node():
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedAutomatonError(f"truncated formula {text!r}")
        head = tokens[pos]
        pos += 1
        if head == "atom":
            if pos >= len(tokens) or tokens[pos] in "(),":
                raise MalformedAutomatonError(f"atom without state in {text!r}")
            pos += 1
            return Atom(tokens[pos - 1])
        if head in ("and", "or"):
            expect("(")
            parts = [node()]
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                parts.append(node())
            expect(")")
            if len(parts) < 2:
                raise MalformedAutomatonError(f"{head} needs two or more operands in {text!r}")
            return conj(*parts) if head == "and" else disj(*parts)
        raise MalformedAutomatonError(f"unexpected token {head!r} in formula {text!r}")

    f = node()
    if pos != len(tokens):
        raise MalformedAutomatonError(f"trailing tokens in formula {text!r}")
    return f


def loads(text: str) -> AlternatingAutomaton:
    states = start = None
    accepting: list[str] = []
    delta: dict[tuple[str, int], Formula] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "states":
            states = rest.split()
        elif head == "start":
            start = rest.strip()
        elif head == "accept":
            accepting = rest.split()
        elif head == "delta":
            lhs, eq, rhs = rest.partition("=")
            parts = lhs.split()
            if not eq or len(parts) != 2 or parts[1] not in ("0", "1"):
                raise MalformedAutomatonError(f"line {lineno}: expected 'delta <state> <0|1> = <formula>'")
            key = (parts[0], int(parts[1]))
            if key in delta:
                raise MalformedAutomatonError(f"line {lineno}: duplicate transition for {key}")
            delta[key] = parse_formula(rhs)
        else:
            raise MalformedAutomatonError(f"line {lineno}: unknown directive {head!r}")
    if states is None or start is None:
        raise MalformedAutomatonError("missing 'states' or 'start' line")
    return AlternatingAutomaton(states, start, accepting, delta)


def dumps(aut: AlternatingAutomaton) -> str:
    lines = [
        "states " + " ".join(aut.states),
        f"start {aut.start}",
        "accept " + " ".join(s for s in aut.states if s in aut.accepting),
    ]
    for s in aut.states:
        for a in SYMBOLS:
            lines.append(f"delta {s} {a} = {format_formula(aut.delta[s, a])}")
    return "\n".join(lines).rstrip() + "\n"


def load(path) -> AlternatingAutomaton:
    with open(path) as fh:
        return loads(fh.read())

