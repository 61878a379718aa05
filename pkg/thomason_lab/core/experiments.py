"""Lemma checks, step-count sweeps and reports over the family G_n."""

import concurrent.futures
import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Literal, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from ..utils.logger import log_lemma_result, log_sweep_row
from ..utils.snapshot import load_canonical_wiring
from ..utils.timing import PerformanceTimer
from .config import LabConfig
from .errors import BudgetExceededError, ClassificationError, ParameterError
from .family import FamilyInstance, GadgetWiring, build
from .graph import OrientedHamPath
from .lollipop import WalkTrace, run_thomason
from .oracle import enumerate_ham_paths
from .patterns import (
    BOUNCING,
    Description,
    NumberPattern,
    TransitionReport,
    classify_bounce,
    describe,
    encode_rightmost,
    verify_transitions,
)
from .words import enumerate_language, growth_constant, phi, recurrence_table

CSV_HEADER = ("n", "steps", "rightmost_count", "max_gap", "end_cycle_ok")


def load_instance(n: int, config: Optional[LabConfig] = None) -> FamilyInstance:
    """G_n on the canonical wiring of the checked-in snapshot."""
    config = config or LabConfig()
    wiring = load_canonical_wiring(config.snapshot_path)
    return build(n, wiring, config.oracle_max_vertices)


def block_prefix(block: str, n: int, head: str = "") -> str:
    """Length-n prefix of head followed by block repeated."""
    word = head
    while len(word) < n:
        word += block
    return word[:n]


class LemmaCase(BaseModel):
    n: int
    passed: bool
    detail: str = ""
    witness: dict[str, Any] = Field(default_factory=dict)
    trace_ref: str = ""


class LemmaReport(BaseModel):
    lemma: str
    passed: bool = True
    cases: list[LemmaCase] = Field(default_factory=list)

    def add(self, case: LemmaCase) -> None:
        self.cases.append(case)
        self.passed = self.passed and case.passed
        log_lemma_result(self.lemma, case.n, case.passed, case.detail)


def _trace_ref(n: int, level: str) -> str:
    return f"thomason run --n {n} --log {level}"


def verify_lemma_init(n_range: Iterable[int], wiring: GadgetWiring, config: Optional[LabConfig] = None) -> LemmaReport:
    """First rightmost word is a prefix of (PQU)*, last a prefix of (WSQU)*, and the walk ends at C_1."""
    config = config or LabConfig()
    report = LemmaReport(lemma="init")
    for n in n_range:
        instance = build(n, wiring, config.oracle_max_vertices)
        trace = run_thomason(instance, "rightmost", budget=config.step_budget, checkpoint_every=config.checkpoint_every)
        paths = trace.rightmost_paths or []
        if not paths:
            report.add(LemmaCase(n=n, passed=False, detail="no rightmost path", trace_ref=_trace_ref(n, "rightmost")))
            continue
        first, first_gamma = encode_rightmost(instance, OrientedHamPath(tuple(paths[0])))
        last, last_gamma = encode_rightmost(instance, OrientedHamPath(tuple(paths[-1])))
        problems = []
        if first.sigma_word != block_prefix("PQU", n):
            problems.append(f"first word {first.sigma_word}")
        if last.sigma_word != block_prefix("WSQU", n):
            problems.append(f"last word {last.sigma_word}")
        if (n % 4 == 1) != last_gamma.endswith("C"):
            problems.append(f"last compressed word {last_gamma}")
        if trace.end_cycle != list(instance.c1.order):
            problems.append("walk does not end at C_1")
        report.add(
            LemmaCase(
                n=n,
                passed=not problems,
                detail="; ".join(problems),
                witness={
                    "first_word": first.sigma_word,
                    "last_word": last.sigma_word,
                    "first_gamma": first_gamma,
                    "last_gamma": last_gamma,
                    "steps": trace.steps,
                },
                trace_ref=_trace_ref(n, "rightmost"),
            )
        )
    return report


def _paths_ending_in_gadgets(instance: FamilyInstance, paths: Iterable[OrientedHamPath]) -> list[OrientedHamPath]:
    return [
        p for p in paths if 0 <= instance.component(p.end) < instance.n and not instance.graph.has_edge(p.start, p.end)
    ]


def verify_lemma_bounce(n: int, wiring: GadgetWiring, config: Optional[LabConfig] = None) -> LemmaReport:
    """Patterns 1 and 2 bounce, every other number pattern conducts.

    Patterns the walk never produces are classified on oracle paths from any cap vertex.
    """
    config = config or LabConfig()
    if 2 * n + 6 > config.oracle_max_vertices:
        raise ParameterError(f"n={n} exceeds the oracle bound")
    instance = build(n, wiring, config.oracle_max_vertices)
    trace = run_thomason(instance, "full", budget=config.step_budget, checkpoint_every=config.checkpoint_every)
    walked = _paths_ending_in_gadgets(instance, trace.paths())
    report = LemmaReport(lemma="bounce")
    witness: dict[str, Any] = {}
    problems = []
    fallback: Optional[list[OrientedHamPath]] = None
    for pattern in NumberPattern:
        source = "walk"
        present = [p for p in walked if describe(instance, p).terminal == str(int(pattern))]
        if not present:
            if fallback is None:
                fallback = _paths_ending_in_gadgets(instance, enumerate_ham_paths(instance.graph, instance.cap))
            present, source = fallback, "oracle"
        try:
            result = classify_bounce(instance, pattern, present)
        except ClassificationError as e:
            problems.append(f"pattern {int(pattern)}: {e}")
            continue
        expected = "bouncing" if pattern in BOUNCING else "conducting"
        witness[str(int(pattern))] = {
            "behaviour": result.behaviour,
            "occurrences": result.occurrences,
            "source": source,
        }
        if result.behaviour != expected:
            problems.append(f"pattern {int(pattern)} is {result.behaviour}")
    report.add(
        LemmaCase(n=n, passed=not problems, detail="; ".join(problems), witness=witness, trace_ref=_trace_ref(n, "full"))
    )
    return report


def _fill_templates(description: Description, n: int) -> Optional[set[str]]:
    k = len(description.letters)
    word = description.sigma_word
    if description.terminal == "1":
        head = word[:k]
        return {block_prefix("WSQU", n, head + "PQU"), block_prefix("WSQU", n, head + "WRX")}
    if description.terminal == "2":
        head = word[: k - 1]
        return {block_prefix("PQU", n, head + "WSQU"), block_prefix("PQU", n, head + "WRX")}
    return None


def verify_lemma_fill(n: int, wiring: GadgetWiring, config: Optional[LabConfig] = None) -> LemmaReport:
    """Bounce events sit between the two rightmost words the templates predict, adjacent in the order."""
    config = config or LabConfig()
    instance = build(n, wiring, config.oracle_max_vertices)
    trace = run_thomason(instance, "full", budget=config.step_budget, checkpoint_every=config.checkpoint_every)
    descriptions = [describe(instance, p) for p in trace.paths()]
    language = enumerate_language(n)
    rank = {w: i for i, w in enumerate(language)}
    problems: list[str] = []
    events = 0

    rightmost_at = [j for j, d in enumerate(descriptions) if d.terminal == "$"]
    for j, d in enumerate(descriptions):
        if d.terminal == "2" and not d.sigma_word.endswith("W"):
            problems.append(f"step {j}: pattern 2 after {d.sigma_word or 'the cap'}")
        templates = _fill_templates(d, n)
        if templates is None:
            continue
        before = [i for i in rightmost_at if i < j]
        after = [i for i in rightmost_at if i > j]
        if not before or not after:
            problems.append(f"step {j}: bounce without surrounding rightmost paths")
            continue
        events += 1
        pair = {descriptions[before[-1]].sigma_word, descriptions[after[0]].sigma_word}
        if pair != templates:
            problems.append(f"step {j}: {d} led to {sorted(pair)}, expected {sorted(templates)}")
        low, high = phi(descriptions[before[-1]].sigma_word), phi(descriptions[after[0]].sigma_word)
        if low not in rank or high not in rank or rank[high] - rank[low] != 1:
            problems.append(f"step {j}: {low} and {high} are not consecutive in the order")

    gammas = [phi(descriptions[j].sigma_word) for j in rightmost_at]
    distinct = [g for i, g in enumerate(gammas) if i == 0 or gammas[i - 1] != g]
    if distinct != language:
        problems.append("rightmost words do not visit the language in order")
    if len(gammas) != 2 * len(language):
        problems.append(f"{len(gammas)} rightmost paths for {len(language)} words")
    transitions: TransitionReport = verify_transitions(descriptions)
    if not transitions.ok:
        problems.append(f"{len(transitions.unlisted)} unlisted transitions")

    report = LemmaReport(lemma="fill")
    report.add(
        LemmaCase(
            n=n,
            passed=not problems,
            detail="; ".join(problems[:5]),
            witness={
                "bounce_events": events,
                "rightmost_paths": len(gammas),
                "words": len(language),
                "transitions": transitions.model_dump(),
            },
            trace_ref=_trace_ref(n, "full"),
        )
    )
    return report


class SweepRow(BaseModel):
    n: int
    steps: int
    rightmost_count: int
    max_gap: int
    end_cycle_ok: bool
    partial: bool = False


class SweepResult(BaseModel):
    rows: list[SweepRow] = Field(default_factory=list)
    slope: Optional[float] = None
    reference_log_c: float
    fit_window: tuple[int, int]
    ratio_band: Optional[tuple[float, float]] = None
    n0: Optional[int] = None
    gaps_ok: bool = True
    rightmost_ok: bool = True
    partial: bool = False


def _sweep_row(n: int, shift: tuple[int, int, int], max_vertices: int, budget: int, checkpoint: int) -> SweepRow:
    instance = build(n, GadgetWiring.from_shift(shift), max_vertices)
    try:
        trace = run_thomason(instance, "counts", budget=budget, checkpoint_every=checkpoint)
    except BudgetExceededError as e:
        partial: WalkTrace = e.partial
        return SweepRow(
            n=n,
            steps=partial.steps,
            rightmost_count=partial.rightmost_count,
            max_gap=partial.max_gap,
            end_cycle_ok=False,
            partial=True,
        )
    return SweepRow(
        n=n,
        steps=trace.steps,
        rightmost_count=trace.rightmost_count,
        max_gap=trace.max_gap,
        end_cycle_ok=trace.end_cycle == list(instance.c1.order),
    )


def doubling_threshold(rows: list[SweepRow]) -> Optional[int]:
    """Smallest n from which T(n+4) > 2 T(n) holds for every measured pair."""
    steps = {row.n: row.steps for row in rows if not row.partial}
    pairs = sorted(n for n in steps if n + 4 in steps)
    if not pairs:
        return None
    n0 = None
    for n in reversed(pairs):
        if steps[n + 4] > 2 * steps[n]:
            n0 = n
        else:
            break
    return n0


def sweep_steps(
    n_min: int,
    n_max: int,
    wiring: GadgetWiring,
    config: Optional[LabConfig] = None,
) -> SweepResult:
    """Step counts T(n) over a range, the fitted growth slope and the amortisation checks."""
    config = config or LabConfig()
    if not 1 <= n_min <= n_max:
        raise ParameterError(f"invalid sweep range {n_min}..{n_max}")
    args = (wiring.shift, config.oracle_max_vertices, config.step_budget, config.checkpoint_every)
    ns = list(range(n_min, n_max + 1))
    logger.info(f"Sweeping n={n_min}..{n_max} with {config.max_workers} worker(s)")
    with PerformanceTimer() as timer:
        if config.max_workers > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=config.max_workers) as executor:
                futures = [executor.submit(_sweep_row, n, *args) for n in ns]
                by_n: dict[int, SweepRow] = {}
                for future in concurrent.futures.as_completed(futures):
                    row = future.result()
                    by_n[row.n] = row
            rows = [by_n[n] for n in ns]
        else:
            rows = [_sweep_row(n, *args) for n in ns]
    logger.info(f"Sweep finished in {timer.duration:.2f}s")
    for row in rows:
        log_sweep_row(row.n, row.steps, row.rightmost_count, row.max_gap)

    c, _, _, _ = growth_constant()
    window = config.fit_window(n_min, n_max)
    result = SweepResult(rows=rows, reference_log_c=math.log(c), fit_window=window)
    result.partial = any(row.partial for row in rows)
    fit_rows = [row for row in rows if window[0] <= row.n <= window[1] and not row.partial]
    if len(fit_rows) >= 2:
        xs = np.array([row.n for row in fit_rows], dtype=float)
        ys = np.log(np.array([row.steps for row in fit_rows], dtype=float))
        result.slope = float(np.polyfit(xs, ys, 1)[0])

    table = recurrence_table(n_max)
    complete = [row for row in rows if not row.partial]
    if complete:
        ratios = [row.steps / table[row.n] for row in complete]
        result.ratio_band = (min(ratios), max(ratios))
    result.gaps_ok = all(row.max_gap <= 2 * row.n for row in rows)
    result.rightmost_ok = all(row.rightmost_count == 2 * table[row.n] for row in complete)
    result.n0 = doubling_threshold(rows)
    if result.partial:
        logger.warning("Sweep incomplete: step budget exhausted for some n")
    return result


def _round(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v) for v in value]
    return value


def report(result: Union[SweepResult, LemmaReport], out_path: Union[str, Path], fmt: Literal["csv", "json"] = "json") -> Path:
    """Write a result in a byte-stable form: sorted keys, floats at 12 significant digits."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        if not isinstance(result, SweepResult):
            raise ParameterError("CSV output is only defined for sweeps")
        with out_path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in result.rows:
                writer.writerow([row.n, row.steps, row.rightmost_count, row.max_gap, str(row.end_cycle_ok).lower()])
    elif fmt == "json":
        payload = _round(result.model_dump(mode="json"))
        out_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    else:
        raise ParameterError(f"unknown report format {fmt!r}")
    logger.info(f"Report written to {out_path}")
    return out_path


def trace_payload(instance: FamilyInstance, trace: WalkTrace) -> dict[str, Any]:
    """Trace summary: n, steps, gaps, rightmost words (when logged) and the end cycle."""
    words = []
    for order in trace.rightmost_paths or []:
        word, _ = encode_rightmost(instance, OrientedHamPath(tuple(order)))
        words.append(word.sigma_word)
    return {
        "n": instance.n,
        "steps": trace.steps,
        "gaps": trace.gap_sizes,
        "rightmost_words": words,
        "end_cycle": trace.end_cycle,
    }
