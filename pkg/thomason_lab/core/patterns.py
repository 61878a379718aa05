"""Gadget traversal patterns and the rules that connect them.

Every gadget sees three strands crossing it: the two rails ending at its
vertices (roles alpha and beta, joined by the rung) and the bypass rail
(role zeta). A path that starts in the cap crosses each cut left of its
end an odd number of times, so the cut is in one of six states: one
crossing on some role, or three crossings with the first one (the strand
leading back to the start) on some role. Letter patterns are the
transitions between cut states, number patterns are the ways to end
inside a gadget.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import permutations
from typing import TYPE_CHECKING, Iterable, Optional, Sequence, Union

from loguru import logger
from pydantic import BaseModel, Field

from .errors import ClassificationError, InvariantError, WiringSearchError
from .graph import Edge, OrientedHamPath, make_edge
from .words import build_j_automaton, phi

if TYPE_CHECKING:
    from .family import FamilyInstance

ALPHA, BETA, ZETA = 0, 1, 2
ROLE_NAMES = ("alpha", "beta", "zeta")
TERMINAL = "$"

CutState = tuple[int, int]


@dataclass(frozen=True)
class PatternClass:
    """A letter-pattern class in gadget-local terms."""

    name: str
    source: CutState
    local_target: CutState
    paired: bool


PATTERN_CLASSES = (
    PatternClass("E1a", (3, ALPHA), (1, ZETA), False),
    PatternClass("E1b", (3, BETA), (1, ZETA), False),
    PatternClass("E2", (1, ALPHA), (1, BETA), False),
    PatternClass("E3", (1, BETA), (1, ALPHA), False),
    PatternClass("E4", (1, ZETA), (3, ZETA), True),
    PatternClass("E5a", (3, ALPHA), (3, ALPHA), True),
    PatternClass("E5b", (3, BETA), (3, BETA), True),
    PatternClass("E5z", (3, ZETA), (3, ZETA), True),
)
CLASS_BY_NAME = {cls.name: cls for cls in PATTERN_CLASSES}
CUT_STATES: tuple[CutState, ...] = tuple((c, role) for c in (1, 3) for role in (ALPHA, BETA, ZETA))
PAIRED_LETTERS = frozenset("UWRX")


class LetterPattern(str, Enum):
    P = "P"
    Q = "Q"
    S = "S"
    Y = "Y"
    U1 = "U′"
    U2 = "U″"
    W1 = "W′"
    W2 = "W″"
    X1 = "X′"
    X2 = "X″"
    R1 = "R′"
    R2 = "R″"

    @property
    def symbol(self) -> str:
        """Collapse primed variants onto their Σ letter."""
        return self.value[0]

    @classmethod
    def from_letter(cls, letter: str, prime: int = 0) -> "LetterPattern":
        return cls(letter + ("", "′", "″")[prime])


class NumberPattern(IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4
    FIVE = 5
    SIX = 6
    SEVEN = 7
    EIGHT = 8


GadgetPattern = Union[LetterPattern, NumberPattern]

# (end vertex role, last edge, crossings at the left cut, left role), with
# "p" the rung role entered by P, "s" the other rung role and "z" the bypass.
NUMBER_TABLE = {
    NumberPattern.ONE: ("s", "left", 3, "p"),
    NumberPattern.TWO: ("p", "left", 3, "s"),
    NumberPattern.THREE: ("s", "right", 1, "p"),
    NumberPattern.FOUR: ("s", "rung", 1, "z"),
    NumberPattern.FIVE: ("s", "left", 3, "z"),
    NumberPattern.SIX: ("p", "left", 3, "z"),
    NumberPattern.SEVEN: ("p", "rung", 1, "z"),
    NumberPattern.EIGHT: ("p", "right", 1, "s"),
}
BOUNCING = frozenset({NumberPattern.ONE, NumberPattern.TWO})

# Right-moving rewrite rules: terminal -> set of (inserted letters + new terminal).
RIGHT_RULES: dict[str, frozenset[str]] = {
    "1": frozenset({"P3", "WR5", "P$", "W$", "WR$"}),
    "2": frozenset({"R6", "SQ7", "R$", "S$", "SQ$"}),
    "3": frozenset({"Q4", "Q$"}),
    "4": frozenset({"UWS3", "U$", "UW$", "UWS$"}),
    "5": frozenset({"XWS3", "X$", "XW$", "XWS$"}),
    "6": frozenset({"XPQ7", "X$", "XP$", "XPQ$"}),
    "7": frozenset({"UPQ7", "U$", "UP$", "UPQ$"}),
}


class PatternLabels(BaseModel):
    """Letter names of the pattern classes, fixed by matching the rightmost-path automaton."""

    model_config = {"frozen": True}

    letters: dict[str, str]
    states: dict[str, tuple[int, int]]
    p_role: int

    @property
    def s_role(self) -> int:
        return BETA if self.p_role == ALPHA else ALPHA

    def letter_of(self, class_name: str) -> str:
        for letter, name in self.letters.items():
            if name == class_name:
                return letter
        raise ClassificationError(f"pattern class {class_name} carries no letter")

    def role(self, key: str) -> int:
        return {"p": self.p_role, "s": self.s_role, "z": ZETA}[key]


def derive_cut_automaton(shift: Sequence[int]) -> list[tuple[CutState, str, CutState]]:
    """Transitions between cut states induced by the pattern classes under a wiring shift."""
    transitions = []
    for cls in PATTERN_CLASSES:
        c, role = cls.local_target
        transitions.append((cls.source, cls.name, (c, shift[role])))
    return transitions


def match_j_automaton(shift: Sequence[int]) -> Optional[PatternLabels]:
    """Embed the rightmost-path automaton into the cut-state automaton of a wiring.

    Returns the unique labelling, or None when the wiring does not realize the
    automaton. More than one embedding is an error.
    """
    automaton = build_j_automaton()
    cut = derive_cut_automaton(shift)
    found: list[PatternLabels] = []
    for image in permutations(CUT_STATES, len(automaton.states)):
        state_map = dict(zip(automaton.states, image))
        letters: dict[str, str] = {}
        for source, letter, target in automaton.transitions:
            candidates = [
                name
                for src, name, tgt in cut
                if src == state_map[source]
                and tgt == state_map[target]
                and CLASS_BY_NAME[name].paired == (letter in PAIRED_LETTERS)
            ]
            if len(candidates) != 1:
                break
            letters[letter] = candidates[0]
        else:
            if len(set(letters.values())) != len(letters):
                continue
            unused = [
                cls.name for cls in PATTERN_CLASSES if not cls.paired and cls.name not in letters.values()
            ]
            if len(unused) != 1:
                continue
            letters["Y"] = unused[0]
            p_role = CLASS_BY_NAME[letters["P"]].source[1]
            found.append(PatternLabels(letters=letters, states=state_map, p_role=p_role))
    if len(found) > 1:
        raise WiringSearchError(f"wiring {tuple(shift)} embeds the automaton in {len(found)} ways")
    return found[0] if found else None


class PathView:
    """Per-path lookups shared by every gadget classification of one path."""

    def __init__(self, instance: "FamilyInstance", path: OrientedHamPath):
        self.instance = instance
        self.path = path
        self.edge_index: dict[Edge, int] = {e: j for j, e in enumerate(path.edges)}
        self.end_component = instance.component(path.end)
        if instance.component(path.start) != -1:
            raise ClassificationError(f"path starts at {path.start}, outside the cap")

    def cut_state(self, k: int) -> Optional[CutState]:
        """Crossings of cut k and the role of the single or first crossing strand."""
        frame = self.instance.frames[k]
        used = [r for r in range(3) if self.instance.cut_edges[k][r] in self.edge_index]
        if len(used) % 2 == 0:
            return None
        first = min(used, key=lambda r: self.edge_index[self.instance.cut_edges[k][r]])
        return len(used), frame.index(first)

    def last_crossing_role(self, k: int, frame_index: int) -> int:
        """Role, in gadget frame_index, of the last strand crossing cut k."""
        used = [r for r in range(3) if self.instance.cut_edges[k][r] in self.edge_index]
        last = max(used, key=lambda r: self.edge_index[self.instance.cut_edges[k][r]])
        return self.instance.frames[frame_index].index(last)


def _local_edges(instance: "FamilyInstance", i: int) -> dict[str, Edge]:
    a, b = instance.gadget_vertices[i]
    r_alpha, r_beta, r_zeta = instance.frames[i]
    return {
        "aL": instance.cut_edges[i][r_alpha],
        "bL": instance.cut_edges[i][r_beta],
        "aR": instance.cut_edges[i + 1][r_alpha],
        "bR": instance.cut_edges[i + 1][r_beta],
        "z": instance.cut_edges[i][r_zeta],
        "ab": make_edge(a, b),
    }


_CLASS_BY_EDGES = {
    frozenset({"aL", "bL", "ab", "z"}): "E1",
    frozenset({"aL", "ab", "bR"}): "E2",
    frozenset({"bL", "ab", "aR"}): "E3",
    frozenset({"z", "ab", "aR", "bR"}): "E4",
    frozenset({"aL", "bL", "aR", "bR", "z"}): "E5",
}


def _classify_letter(view: PathView, i: int, local: dict[str, Edge]) -> LetterPattern:
    used = frozenset(name for name, e in local.items() if e in view.edge_index)
    family = _CLASS_BY_EDGES.get(used)
    left = view.cut_state(i)
    if family is None or left is None:
        raise ClassificationError(f"unclassifiable traversal of gadget {i}: edges {sorted(used)}")
    if family in ("E1", "E5"):
        name = family + "abz"[left[1]]
    else:
        name = family
    cls = CLASS_BY_NAME.get(name)
    if cls is None or cls.source != left:
        raise ClassificationError(f"unclassifiable traversal of gadget {i}: {name} entered from {left}")
    letter = view.instance.labels.letter_of(name)
    if not cls.paired:
        return LetterPattern.from_letter(letter)
    possible = [r for r in (ALPHA, BETA, ZETA) if r != left[1]] if family == "E5" else [ALPHA, BETA]
    y = view.last_crossing_role(i + 1, i)
    return LetterPattern.from_letter(letter, 1 if y == possible[0] else 2)


def _classify_number(view: PathView, i: int, local: dict[str, Edge]) -> NumberPattern:
    instance = view.instance
    a, b = instance.gadget_vertices[i]
    end = view.path.end
    end_role = ALPHA if end == a else BETA
    last = make_edge(view.path.order[-2], end)
    side = "a" if end == a else "b"
    if last == local[side + "L"]:
        via = "left"
    elif last == local[side + "R"]:
        via = "right"
    elif last == local["ab"]:
        via = "rung"
    else:
        raise ClassificationError(f"unclassifiable traversal of gadget {i}: end {end} entered oddly")
    left = view.cut_state(i)
    if left is None:
        raise ClassificationError(f"unclassifiable traversal of gadget {i}: even left cut")
    labels = instance.labels
    for pattern, (end_key, via_key, crossings, role_key) in NUMBER_TABLE.items():
        if (
            labels.role(end_key) == end_role
            and via_key == via
            and crossings == left[0]
            and labels.role(role_key) == left[1]
        ):
            return pattern
    raise ClassificationError(f"unclassifiable traversal of gadget {i}: end via {via} from {left}")


def classify_gadget(instance: "FamilyInstance", p: OrientedHamPath, gadget_index: int) -> GadgetPattern:
    """Letter pattern for a gadget left of the path's end, number pattern for the gadget holding it."""
    return classify_in_view(PathView(instance, p), gadget_index)


def classify_in_view(view: PathView, gadget_index: int) -> GadgetPattern:
    instance = view.instance
    if not 0 <= gadget_index < instance.n:
        raise ClassificationError(f"gadget index {gadget_index} outside 0..{instance.n - 1}")
    local = _local_edges(instance, gadget_index)
    if view.end_component == gadget_index:
        return _classify_number(view, gadget_index, local)
    if view.end_component < gadget_index:
        raise ClassificationError(f"gadget {gadget_index} lies right of the path end")
    return _classify_letter(view, gadget_index, local)


class Description(BaseModel):
    """Pattern description of a path: letters left of its end plus the terminal symbol."""

    letters: list[str]
    terminal: Optional[str] = None

    @property
    def sigma_word(self) -> str:
        return "".join(letter[0] for letter in self.letters)

    def __str__(self) -> str:
        return self.sigma_word + (self.terminal or "")


def describe(instance: "FamilyInstance", p: OrientedHamPath) -> Description:
    """Classify every gadget left of the end; the terminal is a number, $ in the pac, None in the cap."""
    view = PathView(instance, p)
    end = view.end_component
    if end == -1:
        return Description(letters=[], terminal=None)
    letters = [str(classify_in_view(view, i).value) for i in range(min(end, instance.n))]
    if end == instance.n:
        return Description(letters=letters, terminal=TERMINAL)
    number = classify_in_view(view, end)
    return Description(letters=letters, terminal=str(int(number)))


class PatternWord(BaseModel):
    sigma_word: str
    letters: list[str]
    terminal: str = TERMINAL


def encode_rightmost(instance: "FamilyInstance", p: OrientedHamPath) -> tuple[PatternWord, str]:
    """Σ-word of a rightmost path and its compressed image."""
    if instance.component(p.end) != instance.n:
        raise ClassificationError(f"path ending at {p.end} is not rightmost")
    description = describe(instance, p)
    word = PatternWord(sigma_word=description.sigma_word, letters=description.letters)
    if not build_j_automaton().accepts(word.sigma_word):
        raise InvariantError(f"rightmost word {word.sigma_word} rejected by the automaton")
    return word, phi(word.sigma_word)


class RealizationReport(BaseModel):
    """Gadget patterns seen over every Hamiltonian path that starts in the cap."""

    paths: int
    letters: dict[str, int]
    numbers: dict[int, int]
    unclassified: list[str] = Field(default_factory=list)

    @property
    def complete(self) -> bool:
        return (
            set(self.letters) == {p.value for p in LetterPattern}
            and set(self.numbers) == {int(p) for p in NumberPattern}
            and not self.unclassified
        )


def realized_patterns(instances: Iterable["FamilyInstance"]) -> RealizationReport:
    """Classify every gadget of every cap-started Hamiltonian path of the given instances."""
    from .oracle import enumerate_ham_paths

    letters: Counter[str] = Counter()
    numbers: Counter[int] = Counter()
    unclassified: list[str] = []
    paths = 0
    for instance in instances:
        for p in enumerate_ham_paths(instance.graph, instance.cap):
            view = PathView(instance, p)
            if view.end_component == -1:
                continue
            paths += 1
            for i in range(min(view.end_component + 1, instance.n)):
                try:
                    pattern = classify_in_view(view, i)
                except ClassificationError as e:
                    unclassified.append(f"G_{instance.n}: {e}")
                    continue
                if isinstance(pattern, LetterPattern):
                    letters[pattern.value] += 1
                else:
                    numbers[int(pattern)] += 1
    logger.debug(f"Realized {len(letters)} letter and {len(numbers)} number patterns over {paths:,} paths")
    return RealizationReport(
        paths=paths,
        letters=dict(sorted(letters.items())),
        numbers=dict(sorted(numbers.items())),
        unclassified=unclassified,
    )


class TransitionReport(BaseModel):
    ok: bool
    checked: int
    right_moves: int = 0
    left_moves: int = 0
    sibling_moves: int = 0
    cap_moves: int = 0
    unlisted: list[str] = Field(default_factory=list)
    pattern_eight: list[str] = Field(default_factory=list)
    observed: dict[str, int] = Field(default_factory=dict)


def _rule_applies(before: Description, after: Description) -> bool:
    if before.terminal in (None, TERMINAL):
        return False
    k = len(before.letters)
    if [v[0] for v in after.letters[:k]] != [v[0] for v in before.letters]:
        return False
    rhs = "".join(v[0] for v in after.letters[k:]) + (after.terminal or "")
    return rhs in RIGHT_RULES.get(before.terminal, frozenset())


def verify_transitions(descriptions: Iterable[Description]) -> TransitionReport:
    """Check consecutive path descriptions of a walk against the rewrite rules."""
    items = list(descriptions)
    report = TransitionReport(ok=True, checked=0)
    observed: Counter[str] = Counter()
    for before, after in zip(items, items[1:]):
        report.checked += 1
        move = f"{before} -> {after}"
        if before.terminal is None or after.terminal is None:
            report.cap_moves += 1
            continue
        if before.terminal == TERMINAL and after.terminal == TERMINAL and before.sigma_word == after.sigma_word:
            report.sibling_moves += 1
            continue
        if _rule_applies(before, after):
            report.right_moves += 1
            observed[f"{before.terminal} -> {after.terminal}"] += 1
            continue
        if _rule_applies(after, before):
            report.left_moves += 1
            observed[f"{after.terminal} <- {before.terminal}"] += 1
            continue
        if "8" in (before.terminal, after.terminal):
            report.pattern_eight.append(move)
            logger.info(f"Observed unlisted pattern-8 transition: {move}")
            continue
        report.unlisted.append(move)
    report.observed = dict(sorted(observed.items()))
    report.ok = not report.unlisted
    return report


class BounceResult(BaseModel):
    pattern: int
    behaviour: str
    occurrences: int


def end_moves(instance: "FamilyInstance", p: OrientedHamPath, successors: Sequence[OrientedHamPath]) -> list[str]:
    """Direction of each successor's end relative to the gadget holding p's end."""
    gadget = instance.component(p.end)
    moves = []
    for q in successors:
        target = instance.component(q.end)
        moves.append("right" if target > gadget else "left" if target < gadget else "stay")
    return moves


def classify_bounce(
    instance: "FamilyInstance",
    number_pattern: NumberPattern,
    paths: Iterable[OrientedHamPath],
) -> BounceResult:
    """Bouncing when every lollipop moves the end right, conducting when each path moves once each way."""
    from .lollipop import lollipop_neighbors

    occurrences = 0
    kinds: set[str] = set()
    for p in paths:
        gadget = instance.component(p.end)
        if not 0 <= gadget < instance.n:
            continue
        if classify_gadget(instance, p, gadget) != number_pattern:
            continue
        occurrences += 1
        moves = sorted(end_moves(instance, p, [q for _, q in lollipop_neighbors(instance.graph, p).successors]))
        if moves == ["right", "right"]:
            kinds.add("bouncing")
        elif moves == ["left", "right"]:
            kinds.add("conducting")
        else:
            raise ClassificationError(f"pattern {int(number_pattern)} path moves {moves}")
    if occurrences == 0:
        raise ClassificationError(f"no occurrences of pattern {int(number_pattern)}")
    if len(kinds) != 1:
        raise ClassificationError(f"pattern {int(number_pattern)} shows mixed behaviour {sorted(kinds)}")
    return BounceResult(pattern=int(number_pattern), behaviour=kinds.pop(), occurrences=occurrences)
