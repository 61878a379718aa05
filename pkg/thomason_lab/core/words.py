"""Rightmost-path words: the automaton, the block compression, the counter order and counting."""

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import product
from typing import Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel

from .errors import InvariantError, NumericError, ParameterError

SIGMA = ("P", "Q", "U", "W", "R", "X", "S")
GAMMA = ("A", "T", "G")
BLOCKS = {"PQU": "A", "WRX": "T", "WSQU": "G"}
RESIDUALS = {"P": "A", "PQ": "A", "WR": "T", "WS": "G", "WSQ": "G", "W": "C"}

# Generating function numerator and denominator, lowest degree first.
GF_NUMERATOR = (1, 2, 3, 1)
GF_DENOMINATOR = (1, 0, 0, -2, -1)
CHARACTERISTIC = (1, 2, 0, 0, -1)  # z^4 + 2z^3 - 1, highest degree first
ENUMERATION_BOUND = 12


@dataclass(frozen=True)
class JAutomaton:
    """Deterministic automaton over Σ; every state accepts, so it recognizes a prefix-closed language."""

    states: tuple[str, ...]
    initial: str
    accepting: frozenset[str]
    transitions: tuple[tuple[str, str, str], ...]

    def step(self, state: str, letter: str) -> Optional[str]:
        for source, label, target in self.transitions:
            if source == state and label == letter:
                return target
        return None

    def run(self, word: str) -> Optional[str]:
        state: Optional[str] = self.initial
        for letter in word:
            state = self.step(state, letter)
            if state is None:
                return None
        return state

    def accepts(self, word: str) -> bool:
        final = self.run(word)
        return final is not None and final in self.accepting

    def words(self, n: int) -> list[str]:
        """All accepted words of length exactly n, in lexicographic order of Σ."""
        found: list[str] = []

        def extend(state: str, prefix: str) -> None:
            if len(prefix) == n:
                if state in self.accepting:
                    found.append(prefix)
                return
            for source, label, target in self.transitions:
                if source == state:
                    extend(target, prefix + label)

        extend(self.initial, "")
        return sorted(found, key=lambda w: [SIGMA.index(ch) for ch in w])

    def to_dot(self, name: str = "J") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];']
        for state in self.states:
            shape = "doublecircle" if state in self.accepting else "circle"
            lines.append(f'  "{state}" [shape={shape}];')
        lines.append(f'  start -> "{self.initial}";')
        for source, label, target in self.transitions:
            lines.append(f'  "{source}" -> "{target}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_j_automaton() -> JAutomaton:
    """The five-state automaton whose loops spell PQU, WRX and WSQU."""
    transitions = (
        ("aa", "P", "q"),
        ("q", "Q", "uv"),
        ("uv", "U", "aa"),
        ("aa", "W", "r"),
        ("r", "R", "x"),
        ("x", "X", "aa"),
        ("r", "S", "q"),
    )
    states = ("aa", "q", "uv", "r", "x")
    return JAutomaton(states, "aa", frozenset(states), transitions)


def block_prefix_language(n: int) -> set[str]:
    """Length-n prefixes of words in {WRX, PQU, WSQU}*, by direct enumeration."""
    found: set[str] = set()

    def extend(prefix: str) -> None:
        if len(prefix) >= n:
            found.add(prefix[:n])
            return
        for block in BLOCKS:
            extend(prefix + block)

    extend("")
    return found


def phi(word: str) -> str:
    """Compress a Σ-word into a word over {A, T, G, C}."""
    out: list[str] = []
    i = 0
    while i < len(word):
        for block, symbol in BLOCKS.items():
            if word.startswith(block, i):
                out.append(symbol)
                i += len(block)
                break
        else:
            tail = word[i:]
            if tail not in RESIDUALS:
                raise InvariantError(f"word {word!r} has no compression at position {i}")
            out.append(RESIDUALS[tail])
            i = len(word)
    return "".join(out)


_FIRST_RANK = {"A": 0, "T": 1, "G": 2}


def compare_words(u: str, v: str) -> int:
    """Three-way comparison in the counter order: A < T < G, A < C, reversed after a leading T."""
    if u == v:
        return 0
    if not u or not v:
        raise InvariantError(f"compared {u!r} with its proper extension {v!r}")
    beta, gamma = u[0], v[0]
    if beta == gamma:
        rest = compare_words(u[1:], v[1:])
        return -rest if beta == "T" else rest
    if "C" in (beta, gamma):
        other = gamma if beta == "C" else beta
        if other != "A":
            raise InvariantError(f"unreachable comparison of {other} with C")
        return 1 if beta == "C" else -1
    return -1 if _FIRST_RANK[beta] < _FIRST_RANK[gamma] else 1


def enumerate_language(n: int) -> list[str]:
    """L_n: compressed rightmost words of length n, sorted by the counter order."""
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    sigma_words = build_j_automaton().words(n)
    gamma_words = [phi(w) for w in sigma_words]
    if len(set(gamma_words)) != len(gamma_words):
        raise InvariantError(f"compression is not injective on words of length {n}")
    return sorted(gamma_words, key=cmp_to_key(compare_words))


def check_total_order(words: Sequence[str]) -> bool:
    """Exhaustively check antisymmetry, totality and transitivity of the order on a word set."""
    for u, v in product(words, repeat=2):
        if compare_words(u, v) != -compare_words(v, u):
            return False
        if u != v and compare_words(u, v) == 0:
            return False
    for u, v, w in product(words, repeat=3):
        if compare_words(u, v) < 0 and compare_words(v, w) < 0 and compare_words(u, w) >= 0:
            return False
    return True


def recurrence_table(k_max: int, enumeration_bound: int = ENUMERATION_BOUND) -> list[int]:
    """a_0..a_{k_max} with a_0..a_3 = 1, 2, 3, 3 and a_k = 2 a_{k-3} + a_{k-4}.

    Terms up to enumeration_bound must equal |L_k|.
    """
    if k_max < 0:
        raise ParameterError(f"k_max must be non-negative, got {k_max}")
    table = [1, 2, 3, 3]
    for k in range(4, k_max + 1):
        table.append(2 * table[k - 3] + table[k - 4])
    table = table[: k_max + 1]
    for k in range(min(k_max, enumeration_bound) + 1):
        size = len(enumerate_language(k))
        if size != table[k]:
            raise InvariantError(f"a_{k} = {table[k]} but the language of length {k} has {size} words")
    return table


def series_coefficients(k_max: int) -> list[int]:
    """Exact power-series coefficients of the generating function up to z^k_max."""
    coefficients: list[int] = []
    for k in range(k_max + 1):
        value = GF_NUMERATOR[k] if k < len(GF_NUMERATOR) else 0
        for j in range(1, min(k, len(GF_DENOMINATOR) - 1) + 1):
            value -= GF_DENOMINATOR[j] * coefficients[k - j]
        coefficients.append(value)
    return coefficients


def _newton_polish(coefficients: Sequence[float], z: complex, rounds: int = 50) -> complex:
    poly = np.poly1d(coefficients)
    deriv = poly.deriv()
    for _ in range(rounds):
        slope = deriv(z)
        if slope == 0:
            break
        step = poly(z) / slope
        z -= step
        if abs(step) < 1e-16:
            break
    return z


class AsymptoticsResult(BaseModel):
    a_table: list[int]
    gf_check: list[int]
    enumerated_up_to: int
    roots: list[tuple[float, float]]
    residual: float
    c: float
    c_sqrt: float
    ratio_at_kmax: Optional[float] = None


def growth_constant() -> tuple[float, float, list[complex], float]:
    """Dominant growth constant c and its square root, with the polished roots and worst residual."""
    raw = np.roots(CHARACTERISTIC)
    roots = [_newton_polish(CHARACTERISTIC, complex(z)) for z in raw]
    poly = np.poly1d(CHARACTERISTIC)
    residual = max(abs(poly(z)) for z in roots)
    if residual > 1e-12:
        raise NumericError(f"root residual {residual:.3e} above 1e-12")
    least = min(abs(z) for z in roots)
    c = 1.0 / least
    return c, float(np.sqrt(c)), roots, float(residual)


def asymptotics(k_max: int) -> AsymptoticsResult:
    """Recurrence table, series cross-check and growth constant in one result."""
    if k_max < 4:
        raise ParameterError(f"k_max must be at least 4, got {k_max}")
    table = recurrence_table(k_max)
    series = series_coefficients(k_max)
    if table != series:
        raise InvariantError("recurrence and generating function disagree")
    c, c_sqrt, roots, residual = growth_constant()
    logger.debug(f"growth constant c={c:.12f} from roots {roots}")
    return AsymptoticsResult(
        a_table=table,
        gf_check=series,
        enumerated_up_to=min(k_max, ENUMERATION_BOUND),
        roots=[(z.real, z.imag) for z in roots],
        residual=residual,
        c=c,
        c_sqrt=c_sqrt,
        ratio_at_kmax=table[k_max] / table[k_max - 1],
    )

