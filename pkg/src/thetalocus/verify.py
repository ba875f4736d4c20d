"""Registry of reproduction checks and the report they produce.

Each check takes a :class:`VerifyConfig` and returns ``(status, measured,
tolerances)``.  Every random choice is drawn from an :class:`LCG64` seeded
from the config seed and the check name, so results do not depend on which
other checks run or in what order.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import census, incidence
from .charalg import EVEN, ODD, Characteristic, count_by_parity, direct_sum, enumerate_characteristics, split
from .incidence import RED, RED_SING, ClassificationUncertain
from .rng import LCG64
from .siegel import act, block_sum, random_word, sample_generic
from .thetanum import (
    INDETERMINATE,
    TruncationError,
    eval_theta,
    eval_thetanull,
    heat_residual,
    jet_at_zero,
    shift_multiplier_check,
    shift_ratio_check,
    theta_sum_at_radius,
    vanishing_order_at_zero,
)

PASS, FAIL, UNSURE = "pass", "fail", "indeterminate"
HEADLINE_NOTE = (
    "The infinite-dimensionality of H_2 and the freeness of H_3 for the genus-3 "
    "components are not numerical facts; the nerve/Gysin check is their "
    "property-level shadow only."
)


@dataclass
class VerifyConfig:
    seed: int = 42
    tol: float = 1e-10
    checks: list[str] | None = None  # names or name prefixes such as "charalg"

    @classmethod
    def from_json(cls, obj: dict) -> VerifyConfig:
        unknown = set(obj) - {"seed", "tol", "checks"}
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        cfg = cls(**obj)
        if not isinstance(cfg.seed, int) or not isinstance(cfg.tol, (int, float)) or cfg.tol <= 0:
            raise ValueError("config needs an integer 'seed' and a positive 'tol'")
        if cfg.checks is not None and not all(isinstance(c, str) for c in cfg.checks):
            raise ValueError("'checks' must be a list of strings")
        return cfg


@dataclass
class CheckResult:
    name: str
    anchor: str
    status: str
    measured: dict
    tolerances: dict
    seed: int
    elapsed_s: float = 0.0
    time_limit_s: float = math.inf

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "measured": self.measured,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "elapsed_s": self.elapsed_s,
            "time_limit_s": self.time_limit_s,
        }


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)
    config: VerifyConfig = field(default_factory=VerifyConfig)

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if UNSURE in statuses:
            return UNSURE
        return PASS

    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, UNSURE: 3}[self.status]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "config": {"seed": self.config.seed, "tol": self.config.tol, "checks": self.config.checks},
            "note": HEADLINE_NOTE,
            "checks": [c.to_json() for c in self.checks],
        }


@dataclass(frozen=True)
class _Check:
    name: str
    anchor: str
    time_limit_s: float
    fn: Callable


REGISTRY: dict[str, _Check] = {}


def check(name: str, anchor: str, time_limit_s: float):
    def register(fn):
        REGISTRY[name] = _Check(name, anchor, time_limit_s, fn)
        return fn
    return register


def check_seed(config: VerifyConfig, name: str) -> int:
    digest = hashlib.sha256(f"{config.seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _rng(config, name) -> LCG64:
    return LCG64(check_seed(config, name))


def _random_z(rng: LCG64, g: int, size: float = 0.5) -> np.ndarray:
    return np.array([complex(rng.uniform(-size, size), rng.uniform(-size, size)) for _ in range(g)])


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# --- checks, one per acceptance criterion --------------------------------------


@check("charalg.census", "parity counts: 3/1 in genus 1, 10/6 in genus 2, 36/28 in genus 3", 1.0)
def _charalg_census(config):
    counts = {g: {p: len(enumerate_characteristics(g, p)) for p in (EVEN, ODD)} for g in (1, 2, 3)}
    expected = {1: {EVEN: 3, ODD: 1}, 2: {EVEN: 10, ODD: 6}, 3: {EVEN: 36, ODD: 28}}
    closed = {g: count_by_parity(g) for g in (1, 2, 3)}
    ok = counts == expected and counts == closed
    return _status(ok), {"counts": {str(g): c for g, c in counts.items()}}, {"exact": True}


def _vanishing_counts(config, name, kind, expected_count, n_points=20):
    tol_zero, tol_nonzero = incidence.TOL_ZERO, incidence.TOL_NONZERO
    rng = _rng(config, name)
    counts, agree, largest_zero, smallest_nonzero = [], True, 0.0, math.inf
    for _ in range(n_points):
        seed = rng.next_u64()
        try:
            report = incidence.vanishing_set_numeric(incidence.sample_point(kind, seed), config.tol)
        except ClassificationUncertain as exc:
            return UNSURE, {"seed": seed, "offending": [d.compact() for d in exc.offending]}, {}
        counts.append(report.count)
        agree &= report.agrees()
        lz, sn = report.margins()
        largest_zero, smallest_nonzero = max(largest_zero, lz), min(smallest_nonzero, sn)
    ok = agree and all(c == expected_count for c in counts)
    measured = {
        "counts": counts,
        "agrees_with_exact": agree,
        "largest_vanishing_magnitude": largest_zero,
        "smallest_nonvanishing_magnitude": smallest_nonzero,
    }
    return _status(ok), measured, {"tol_zero": tol_zero, "tol_nonzero": tol_nonzero, "eval_tol": config.tol}


@check("incidence.red_count", "6 even thetanulls vanish on Omega_0 (+) tau_0", 30.0)
def _red_count(config):
    return _vanishing_counts(config, "incidence.red_count", RED, 6)


@check("incidence.red_sing_count", "9 even thetanulls vanish on h_1^3", 30.0)
def _red_sing_count(config):
    return _vanishing_counts(config, "incidence.red_sing_count", RED_SING, 9)


@check("incidence.exactly_two", "each delta vanishing on h_1^3 vanishes on two of the three [2,1] strata", 30.0)
def _exactly_two(config):
    rng = _rng(config, "incidence.exactly_two")
    cards, min_excluded = {}, math.inf
    for delta in sorted(incidence.vanishing_set_combinatorial(incidence.SINGLETONS)):
        cards[delta.compact()] = len(incidence.components_containing(delta))
        excluded = incidence.excluded_grouping(delta)
        for _ in range(5):
            point = incidence.sample_point(RED, rng.next_u64(), grouping=excluded)
            min_excluded = min(min_excluded, eval_thetanull(delta, point.data, config.tol).normalized())
    ok = all(c == 2 for c in cards.values()) and len(cards) == 9 and min_excluded > incidence.TOL_NONZERO
    census_ = incidence.local_intersection_census()
    ok &= census_.incidences_with_multiplicity == 18 and census_.max_containments == 2
    return _status(ok), {"cardinalities": cards, "min_excluded_magnitude": min_excluded,
                         "census": census_.to_json()}, {"tol_nonzero": incidence.TOL_NONZERO}


@check("thetanum.heat", "2 pi i (1 + delta_jk) d theta / d Omega_jk = d^2 theta / dz_j dz_k", 60.0)
def _heat(config):
    rng = _rng(config, "thetanum.heat")
    worst = 0.0
    rows = []
    for _ in range(20):
        g = 1 + rng.randbelow(3)
        chars = enumerate_characteristics(g)
        delta = chars[rng.randbelow(len(chars))]
        omega = sample_generic(g, rng.next_u64())
        j, k = rng.randbelow(g), rng.randbelow(g)
        res = heat_residual(delta, omega, j, k, config.tol, 1e-5)
        h = abs(jet_at_zero(delta, omega, config.tol).hessian[j, k])
        rel = res / max(1.0, h)
        worst = max(worst, rel)
        rows.append([delta.compact(), j, k, rel])
    return _status(worst < 1e-4), {"worst_relative_residual": worst, "samples": rows}, {"relative": 1e-4, "fd_step": 1e-5}


@check("thetanum.vanishing_order", "order of vanishing at z = 0 is 2 on reducible points", 60.0)
def _order(config):
    rng = _rng(config, "thetanum.vanishing_order")
    orders = []
    odd2 = enumerate_characteristics(2, ODD)
    odd1 = Characteristic("1", "1")
    for _ in range(10):
        point = incidence.sample_point(RED, rng.next_u64())
        delta = direct_sum([odd2[rng.randbelow(len(odd2))], odd1])
        orders.append(vanishing_order_at_zero(delta, point.data, config.tol))
    sing = sorted(incidence.vanishing_set_combinatorial(incidence.SINGLETONS))
    for _ in range(10):
        point = incidence.sample_point(RED_SING, rng.next_u64())
        delta = sing[rng.randbelow(len(sing))]
        orders.append(vanishing_order_at_zero(delta, point.data, config.tol))
    if INDETERMINATE in orders:
        return UNSURE, {"orders": orders}, {}
    return _status(all(o == 2 for o in orders)), {"orders": orders}, {
        "tol_zero": incidence.TOL_ZERO, "tol_nonzero": incidence.TOL_NONZERO}


def _shift_samples(config, name):
    rng = _rng(config, name)
    for _ in range(20):
        g = 1 + rng.randbelow(3)
        chars = enumerate_characteristics(g)
        delta = chars[rng.randbelow(len(chars))]
        omega = sample_generic(g, rng.next_u64())
        zs = [_random_z(rng, g, 0.3) for _ in range(5)]
        yield delta, omega, zs


@check("thetanum.shift_relation", "theta_delta(Omega, z) / theta_0(Omega, z + delta' + delta'' Omega) independent of z", 30.0)
def _shift(config):
    devs = [shift_ratio_check(d, om, zs, config.tol) for d, om, zs in _shift_samples(config, "thetanum.shift_relation")]
    return _status(max(devs) < 1e-6), {"max_relative_deviation": max(devs), "deviations": devs}, {"relative": 1e-6}


@check("thetanum.shift_relation_exact", "reindexing: theta_delta = exp(pi i a Omega a + 2 pi i a (z+b)) theta_0(z + b + Omega a)", 30.0)
def _shift_exact(config):
    devs = [shift_multiplier_check(d, om, zs, config.tol)
            for d, om, zs in _shift_samples(config, "thetanum.shift_relation")]
    return _status(max(devs) < 1e-6), {"max_relative_deviation": max(devs)}, {"relative": 1e-6}


def _product_bound(values):
    """|prod v_hat - prod v| bound from per-factor (value, bound) pairs."""
    total = 0.0
    for i, (_, b) in enumerate(values):
        other = math.prod(abs(v) + bb for j, (v, bb) in enumerate(values) if j != i)
        total += b * other
    return total


@check("thetanum.block_factorization", "theta_{delta_1 + ... + delta_n}(Omega, z) = prod theta_{delta_j}(Omega_j, z(j))", 30.0)
def _factorization(config):
    rng = _rng(config, "thetanum.block_factorization")
    worst_ratio = 0.0
    for sizes in ([2, 1], [1, 2], [1, 1, 1]):
        parts = [sample_generic(s, rng.next_u64()) for s in sizes]
        omega = block_sum(parts)
        z = _random_z(rng, 3, 0.3)
        for delta in enumerate_characteristics(3):
            full = eval_theta(delta, omega, z, config.tol)
            factors, start = [], 0
            for piece, part, s in zip(split(delta, sizes), parts, sizes):
                v = eval_theta(piece, part, z[start : start + s], config.tol)
                factors.append((v.value, v.tail_bound))
                start += s
            prod = math.prod(v for v, _ in factors)
            allowed = full.tail_bound + _product_bound(factors)
            worst_ratio = max(worst_ratio, abs(full.value - prod) / allowed)
    return _status(worst_ratio <= 1.0), {"worst_error_over_allowed": worst_ratio}, {"combined_tail_bound": True}


@check("thetanum.odd_thetanulls", "theta_delta(Omega, 0) = 0 for odd delta", 20.0)
def _odd(config):
    rng = _rng(config, "thetanum.odd_thetanulls")
    worst = 0.0
    for _ in range(20):
        g = 1 + rng.randbelow(3)
        omega = sample_generic(g, rng.next_u64())
        for delta in enumerate_characteristics(g, ODD):
            worst = max(worst, abs(eval_thetanull(delta, omega, config.tol).value))
    return _status(worst < 1e-8), {"max_abs_thetanull": worst}, {"absolute": 1e-8}


@check("census.nerve", "E_1 support {(0,8),(1,6)}; Gysin: H_k = 0 for k >= 4, H_3 free", 1.0)
def _nerve(config):
    table = census.nerve_e1(census.boundary_configuration())
    deg = census.supported_degrees(table)
    gysin = census.gysin_support(10, deg.degrees)
    ok = (
        table.support() == {(0, 8), (1, 6)}
        and deg.degrees == {7, 8}
        and deg.degeneration == census.AUTOMATIC
        and all(gysin[k] == "zero" for k in range(4, 11))
        and gysin[3] == "free"
    )
    return _status(ok), {
        "support": sorted(list(p) for p in table.support()),
        "degrees": sorted(deg.degrees),
        "degeneration": deg.degeneration,
        "gysin": {str(k): v for k, v in gysin.items()},
    }, {"exact": True}


@check("census.formulas", "component count |Sp_g(F_2)| / (2g+2)! and b_1 of M_{0,2g+2}", 1.0)
def _formulas(config):
    cc = {g: census.component_count(g) for g in (2, 3)}
    betti = {g: census.moduli_betti(g) for g in (2, 3)}
    ok = (
        cc == {2: 1, 3: 36}
        and all(c.denominator == 1 for c in cc.values())
        and betti == {2: 9, 3: 20}
        and all(betti[g] == census.moduli_betti_closed_form(g) for g in betti)
    )
    return _status(ok), {"component_count": {str(g): str(c) for g, c in cc.items()},
                         "moduli_betti": {str(g): b for g, b in betti.items()}}, {"exact": True}


@check("incidence.sp_invariance", "vanishing counts are unchanged by Sp_3(Z) words", 60.0)
def _sp_invariance(config):
    rng = _rng(config, "incidence.sp_invariance")
    red = incidence.sample_point(RED, rng.next_u64())
    sing = incidence.sample_point(RED_SING, rng.next_u64())
    rows = []
    try:
        for _ in range(10):
            length = 1 + rng.randbelow(8)
            m = random_word(3, length, rng.next_u64())
            rows.append([length, incidence.vanishing_count(act(m, red.data), config.tol),
                         incidence.vanishing_count(act(m, sing.data), config.tol)])
    except ClassificationUncertain as exc:
        return UNSURE, {"offending": [d.compact() for d in exc.offending], "rows": rows}, {}
    ok = all(r[1] == 6 and r[2] == 9 for r in rows)
    return _status(ok), {"length_red_count_red_sing_count": rows}, {"exact_counts": [6, 9]}


@check("thetanum.tail_soundness", "certified truncation bound", 60.0)
def _tail(config):
    rng = _rng(config, "thetanum.tail_soundness")
    worst = 0.0
    for _ in range(50):
        g = 1 + rng.randbelow(3)
        chars = enumerate_characteristics(g)
        delta = chars[rng.randbelow(len(chars))]
        omega = sample_generic(g, rng.next_u64())
        z = _random_z(rng, g, 0.5)
        v = eval_theta(delta, omega, z, config.tol)
        doubled = theta_sum_at_radius(delta, omega, z, 2 * v.radius)
        worst = max(worst, abs(doubled - v.value) / v.tail_bound)
    return _status(worst < 1.0), {"worst_change_over_bound": worst}, {"ratio": 1.0}


ORDER = [
    "charalg.census",
    "incidence.red_count",
    "incidence.red_sing_count",
    "incidence.exactly_two",
    "thetanum.heat",
    "thetanum.vanishing_order",
    "thetanum.shift_relation",
    "thetanum.block_factorization",
    "thetanum.odd_thetanulls",
    "census.nerve",
    "census.formulas",
    "incidence.sp_invariance",
    "thetanum.tail_soundness",
    "thetanum.shift_relation_exact",
]


def selected(config: VerifyConfig) -> list[str]:
    if not config.checks:
        return list(ORDER)
    out = [n for n in ORDER if any(n == c or n.startswith(c + ".") for c in config.checks)]
    if not out:
        raise ValueError(f"no checks match {config.checks}")
    return out


def run_check(name: str, config: VerifyConfig) -> CheckResult:
    entry = REGISTRY[name]
    start = time.perf_counter()
    try:
        status, measured, tolerances = entry.fn(config)
    except TruncationError as exc:
        status, measured, tolerances = FAIL, {"error": f"truncation: {exc}", "best_bound": exc.best_bound}, {}
    except Exception as exc:  # a crashing check is a failed check, with its diagnostic
        status, measured, tolerances = FAIL, {"error": f"{type(exc).__name__}: {exc}"}, {}
    elapsed = time.perf_counter() - start
    if status == PASS and elapsed > entry.time_limit_s:
        status = FAIL
        measured = dict(measured, time_limit_exceeded=True)
    tolerances = dict(tolerances, eval_tol=config.tol)
    return CheckResult(name, entry.anchor, status, measured, tolerances,
                       check_seed(config, name), elapsed, entry.time_limit_s)


def run_verify(config: VerifyConfig | None = None) -> VerifyReport:
    config = config or VerifyConfig()
    return VerifyReport([run_check(n, config) for n in selected(config)], config)
