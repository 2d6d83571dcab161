"""Reproducible random ensembles, verification campaigns, and CSV output.

Determinism contract: every sample index gets its own numpy PCG64 generator
seeded by a splitmix64-style mix of the master seed and the index, so
parallel and serial campaign execution produce identical rows, and two runs
with the same configuration produce byte-identical CSV files.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .matcore import HermitianMatrix, SpdMatrix, commutator_defect, mat_exp, mat_log
from .geodesic import gamma_commute, project_to_unit_sphere
from .inequalities import (
    CheckerRangeError,
    check_clarkson_mccarthy,
    check_conde_2uc,
    check_distance_lower_bound,
    check_hanner_matrix,
    check_log_majorization_lemma,
    check_p_convexity_high,
    check_p_convexity_low,
    check_sphere_2uc,
    check_sphere_high,
    check_sphere_low,
    check_two_uniform_convexity_norm,
)

__all__ = [
    "SampleConfig",
    "SampleBundle",
    "ScanRecord",
    "ENSEMBLES",
    "CHECKERS",
    "RNG_IDENTITY",
    "CSV_COLUMNS",
    "mix_seed",
    "sample_bundle",
    "sample_spd",
    "sample_spd_pair",
    "sample_spd_triple",
    "run_campaign",
    "gap_scan",
    "render_csv",
    "write_csv",
]

RNG_IDENTITY = "numpy PCG64 via default_rng; per-sample seed = splitmix64(master_seed, index)"

ENSEMBLES = (
    "generic",
    "commuting_pair",
    "commuting_triple",
    "gamma_commuting_triple",
    "near_commuting",
)

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15

CONDITION_GUARD = 1e3
CONDITION_GUARD_ATTEMPTS = 100


def mix_seed(master: int, index: int) -> int:
    """splitmix64 finalizer over master_seed advanced by (index + 1) steps."""
    z = (int(master) + (int(index) + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class SampleConfig:
    """Ensemble parameters; identical configs yield bit-identical samples.

    ``spread`` is the scale of the Gaussian log-entries; ``epsilon`` is only
    consulted by the near_commuting ensemble.
    """

    dim: int
    spread: float = 1.0
    ensemble: str = "generic"
    seed: int = 0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if not self.spread > 0.0:
            raise ValueError(f"spread must be positive, got {self.spread}")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}; choose from {ENSEMBLES}")
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")


@dataclass(frozen=True)
class SampleBundle:
    """One sample's matrices: an SPD triple plus the Hermitian logs of (a, b)."""

    a: SpdMatrix
    b: SpdMatrix
    c: SpdMatrix
    log_a: HermitianMatrix
    log_b: HermitianMatrix


def _rng_for(config: SampleConfig, index: int) -> np.random.Generator:
    return np.random.default_rng(mix_seed(config.seed, index))


def _random_hermitian(rng: np.random.Generator, dim: int, sigma: float) -> HermitianMatrix:
    g = sigma * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return HermitianMatrix(0.5 * (g + g.conj().T))


def _random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _random_invertible(rng: np.random.Generator, dim: int,
                       cond_limit: float = CONDITION_GUARD,
                       max_attempts: int = CONDITION_GUARD_ATTEMPTS) -> np.ndarray:
    for _ in range(max_attempts):
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        if np.linalg.cond(x) <= cond_limit:
            return x
    raise RuntimeError(
        f"no conjugating matrix with condition <= {cond_limit:g} found "
        f"in {max_attempts} attempts"
    )


def _from_basis(basis: np.ndarray, log_values: np.ndarray) -> tuple[SpdMatrix, HermitianMatrix]:
    """SPD matrix with prescribed eigenbasis and log-spectrum, plus its exact log."""
    mat = (basis * np.exp(log_values)) @ basis.conj().T
    log = (basis * log_values) @ basis.conj().T
    return (
        SpdMatrix(0.5 * (mat + mat.conj().T)),
        HermitianMatrix(0.5 * (log + log.conj().T)),
    )


def sample_bundle(config: SampleConfig, index: int) -> SampleBundle:
    """Draw one sample (SPD triple plus logs) for the configured ensemble.

    Draw order within each ensemble is fixed, making samples a pure
    function of (config, index).
    """
    rng = _rng_for(config, index)
    dim, sigma = config.dim, config.spread

    if config.ensemble == "generic":
        h1 = _random_hermitian(rng, dim, sigma)
        h2 = _random_hermitian(rng, dim, sigma)
        h3 = _random_hermitian(rng, dim, sigma)
        return SampleBundle(mat_exp(h1), mat_exp(h2), mat_exp(h3), h1, h2)

    if config.ensemble == "commuting_pair":
        basis = _random_unitary(rng, dim)
        a, log_a = _from_basis(basis, sigma * rng.standard_normal(dim))
        b, log_b = _from_basis(basis, sigma * rng.standard_normal(dim))
        h3 = _random_hermitian(rng, dim, sigma)
        return SampleBundle(a, b, mat_exp(h3), log_a, log_b)

    if config.ensemble == "commuting_triple":
        basis = _random_unitary(rng, dim)
        a, log_a = _from_basis(basis, sigma * rng.standard_normal(dim))
        b, log_b = _from_basis(basis, sigma * rng.standard_normal(dim))
        c, _ = _from_basis(basis, sigma * rng.standard_normal(dim))
        return SampleBundle(a, b, c, log_a, log_b)

    if config.ensemble == "gamma_commuting_triple":
        x = _random_invertible(rng, dim)
        spectra = [sigma * rng.standard_normal(dim) for _ in range(3)]
        mats = []
        for log_values in spectra:
            conj = (x * np.exp(log_values)) @ x.conj().T
            mats.append(SpdMatrix(0.5 * (conj + conj.conj().T)))
        return SampleBundle(mats[0], mats[1], mats[2], mat_log(mats[0]), mat_log(mats[1]))

    # near_commuting: commuting base pair, then B perturbed along a unit
    # Hermitian direction with magnitude config.epsilon.
    basis = _random_unitary(rng, dim)
    a, log_a = _from_basis(basis, sigma * rng.standard_normal(dim))
    b0, log_b0 = _from_basis(basis, sigma * rng.standard_normal(dim))
    direction = _random_hermitian(rng, dim, 1.0)
    direction = HermitianMatrix(direction.array / direction.frobenius())
    h3 = _random_hermitian(rng, dim, sigma)
    if config.epsilon == 0.0:
        b, log_b = b0, log_b0
    else:
        log_b = HermitianMatrix(log_b0.array + config.epsilon * direction.array)
        b = mat_exp(log_b)
    return SampleBundle(a, b, mat_exp(h3), log_a, log_b)


def sample_spd(config: SampleConfig, index: int) -> SpdMatrix:
    """First SPD matrix of the sample at this index."""
    return sample_bundle(config, index).a


def sample_spd_pair(config: SampleConfig, index: int) -> tuple[SpdMatrix, SpdMatrix]:
    """The sample's SPD pair (commuting, near-commuting, ... per ensemble)."""
    bundle = sample_bundle(config, index)
    return bundle.a, bundle.b


def sample_spd_triple(config: SampleConfig, index: int) -> tuple[SpdMatrix, SpdMatrix, SpdMatrix]:
    """The sample's SPD triple."""
    bundle = sample_bundle(config, index)
    return bundle.a, bundle.b, bundle.c


@dataclass(frozen=True)
class ScanRecord:
    """One experiment row: config echo, inequality sides, and defect diagnostics."""

    index: int
    dim: int
    spread: float
    ensemble: str
    seed: int
    epsilon: float
    inequality: str
    p: float
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    commutator_defect: float
    gamma_defect_product: float
    gamma_defect_bracket: float


# One row per evaluated inequality: (name, lhs, rhs, gap, satisfied, commutator_defect).
_Row = tuple[str, float, float, float, bool, float]


def _rows_from_report(report, defect: float) -> list[_Row]:
    return [(report.name, report.lhs, report.rhs, report.gap, report.satisfied, defect)]


def _run_clarkson(bundle: SampleBundle, p: float) -> list[_Row]:
    defect = commutator_defect(bundle.log_a, bundle.log_b)
    lower, upper = check_clarkson_mccarthy(bundle.log_a, bundle.log_b, p)
    return _rows_from_report(lower, defect) + _rows_from_report(upper, defect)


def _run_two_uniform(bundle: SampleBundle, p: float) -> list[_Row]:
    defect = commutator_defect(bundle.log_a, bundle.log_b)
    return _rows_from_report(
        check_two_uniform_convexity_norm(bundle.log_a, bundle.log_b, p), defect
    )


def _run_hanner(bundle: SampleBundle, p: float) -> list[_Row]:
    defect = commutator_defect(bundle.log_a, bundle.log_b)
    return _rows_from_report(check_hanner_matrix(bundle.log_a, bundle.log_b, p), defect)


def _run_distance_bound(bundle: SampleBundle, p: float) -> list[_Row]:
    defect = commutator_defect(bundle.a, bundle.b)
    return _rows_from_report(check_distance_lower_bound(bundle.a, bundle.b, p), defect)


def _run_triple(check) -> Callable[[SampleBundle, float], list[_Row]]:
    def run(bundle: SampleBundle, p: float) -> list[_Row]:
        defect = commutator_defect(bundle.a, bundle.b)
        return _rows_from_report(check(bundle.a, bundle.b, bundle.c, p), defect)

    return run


def _run_sphere(check) -> Callable[[SampleBundle, float], list[_Row]]:
    def run(bundle: SampleBundle, p: float) -> list[_Row]:
        a_sphere = project_to_unit_sphere(bundle.a, p)
        b_sphere = project_to_unit_sphere(bundle.b, p)
        defect = commutator_defect(a_sphere, b_sphere)
        return _rows_from_report(check(a_sphere, b_sphere, p), defect)

    return run


def _run_log_majorization(bundle: SampleBundle, p: float) -> list[_Row]:
    verdict = check_log_majorization_lemma(bundle.log_a, bundle.log_b)
    sum_trace = float(np.trace(bundle.log_a.array + bundle.log_b.array).real)
    bch_trace = sum_trace + float(verdict.slack[-1])
    gap = float(verdict.slack.min())
    defect = commutator_defect(bundle.log_a, bundle.log_b)
    return [("log_majorization", sum_trace, bch_trace, gap, verdict.holds, defect)]


@dataclass(frozen=True)
class CheckerSpec:
    key: str
    p_valid: Callable[[float], bool]
    runner: Callable[[SampleBundle, float], list[_Row]]
    p_independent: bool = False


def _finite(p: float) -> bool:
    return math.isfinite(p)


CHECKERS: dict[str, CheckerSpec] = {
    spec.key: spec
    for spec in (
        CheckerSpec("clarkson_mccarthy", lambda p: _finite(p) and p >= 1.0, _run_clarkson),
        CheckerSpec("two_uniform_convexity", lambda p: 1.0 < p <= 2.0, _run_two_uniform),
        CheckerSpec("hanner",
                    lambda p: 1.0 <= p <= 4.0 / 3.0 or abs(p - 1.5) <= 1e-12, _run_hanner),
        CheckerSpec("distance_lower_bound", lambda p: _finite(p) and p > 1.0,
                    _run_distance_bound),
        CheckerSpec("conde_2uc", lambda p: 1.0 < p <= 2.0, _run_triple(check_conde_2uc)),
        CheckerSpec("sphere_2uc", lambda p: 1.0 < p <= 2.0, _run_sphere(check_sphere_2uc)),
        CheckerSpec("p_convexity_high", lambda p: _finite(p) and p >= 2.0,
                    _run_triple(check_p_convexity_high)),
        CheckerSpec("sphere_high", lambda p: _finite(p) and p >= 2.0,
                    _run_sphere(check_sphere_high)),
        CheckerSpec("p_convexity_low", lambda p: 1.0 < p <= 2.0,
                    _run_triple(check_p_convexity_low)),
        CheckerSpec("sphere_low", lambda p: 1.0 < p <= 2.0, _run_sphere(check_sphere_low)),
        CheckerSpec("log_majorization", lambda p: True, _run_log_majorization,
                    p_independent=True),
    )
}


def _sort_key(record: ScanRecord):
    p = -1.0 if math.isnan(record.p) else record.p
    return (record.index, record.inequality, p)


def run_campaign(config: SampleConfig, inequalities: Sequence[str],
                 p_values: Sequence[float], count: int, *,
                 workers: int = 1, tol_rel: float | None = None) -> list[ScanRecord]:
    """Evaluate the requested inequalities on ``count`` ensemble samples.

    Each requested inequality runs at every requested order inside its
    validity range; an inequality left with no valid order raises
    CheckerRangeError before any sampling.  Rows come back sorted by
    (index, inequality, p) regardless of ``workers``, and ``tol_rel``
    optionally overrides the satisfaction tolerance recorded per row.
    """
    specs = []
    for name in inequalities:
        if name not in CHECKERS:
            raise ValueError(f"unknown inequality {name!r}; choose from {sorted(CHECKERS)}")
        specs.append(CHECKERS[name])
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    p_list = [float(p) for p in p_values]
    plan: list[tuple[CheckerSpec, float]] = []
    for spec in specs:
        if spec.p_independent:
            plan.append((spec, math.nan))
            continue
        valid = [p for p in p_list if spec.p_valid(p)]
        if not valid:
            raise CheckerRangeError(
                f"inequality {spec.key!r} accepts none of the requested orders {p_list}"
            )
        plan.extend((spec, p) for p in valid)

    def rows_for(index: int) -> list[ScanRecord]:
        bundle = sample_bundle(config, index)
        gamma = gamma_commute(bundle.a, bundle.b, bundle.c)
        rows = []
        for spec, p in plan:
            for name, lhs, rhs, gap, satisfied, defect in spec.runner(bundle, p):
                if tol_rel is not None:
                    satisfied = gap >= -tol_rel * max(1.0, abs(lhs), abs(rhs))
                rows.append(ScanRecord(
                    index=index, dim=config.dim, spread=config.spread,
                    ensemble=config.ensemble, seed=config.seed, epsilon=config.epsilon,
                    inequality=name, p=p, lhs=lhs, rhs=rhs, gap=gap,
                    satisfied=bool(satisfied), commutator_defect=defect,
                    gamma_defect_product=gamma.defect_product,
                    gamma_defect_bracket=gamma.defect_bracket,
                ))
        return rows

    if workers <= 1:
        nested = [rows_for(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            nested = list(pool.map(rows_for, range(count)))
    records = [row for rows in nested for row in rows]
    records.sort(key=_sort_key)
    return records


def gap_scan(A: SpdMatrix, B: SpdMatrix, eps_grid: Sequence[float], p, *,
             seed: int = 0) -> list[ScanRecord]:
    """Distance-lower-bound gap along a noncommutativity ray from (A, B).

    For each epsilon in the ascending grid (which must start at 0), B is
    perturbed to ``exp(log B + eps * K)`` with K a seeded unit-Frobenius
    Hermitian direction, and the gap plus commutator defect is recorded.
    The eps = 0 row reproduces the base pair, so its gap vanishes exactly
    when A and B commute.
    """
    grid = [float(e) for e in eps_grid]
    if not grid or grid[0] != 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("eps grid must be strictly ascending and start at 0")
    rng = np.random.default_rng(mix_seed(seed, 0))
    direction = _random_hermitian(rng, A.dim, 1.0)
    direction = HermitianMatrix(direction.array / direction.frobenius())
    log_b = mat_log(B)
    records = []
    for i, eps in enumerate(grid):
        if eps == 0.0:
            b_eps = B
        else:
            b_eps = mat_exp(HermitianMatrix(log_b.array + eps * direction.array))
        report = check_distance_lower_bound(A, b_eps, p)
        records.append(ScanRecord(
            index=i, dim=A.dim, spread=math.nan, ensemble="near_commuting",
            seed=seed, epsilon=eps, inequality=report.name, p=float(p),
            lhs=report.lhs, rhs=report.rhs, gap=report.gap, satisfied=report.satisfied,
            commutator_defect=commutator_defect(A, b_eps),
            gamma_defect_product=math.nan, gamma_defect_bracket=math.nan,
        ))
    return records


CSV_COLUMNS = (
    "index", "dim", "spread", "ensemble", "seed", "epsilon", "inequality", "p",
    "lhs", "rhs", "gap", "satisfied", "commutator_defect",
    "gamma_defect_product", "gamma_defect_bracket",
)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _record_line(record: ScanRecord) -> str:
    return ",".join(_format_value(getattr(record, col)) for col in CSV_COLUMNS)


def render_csv(records: Sequence[ScanRecord], header_comments: Sequence[str] = ()) -> str:
    """Deterministic CSV text: comments, header row, one line per record.

    Floats carry 17 significant digits so a parse-back recovers them exactly.
    """
    lines = [f"# {comment}" for comment in header_comments]
    lines.append(",".join(CSV_COLUMNS))
    lines.extend(_record_line(record) for record in records)
    return "\n".join(lines) + "\n"


def write_csv(records: Sequence[ScanRecord], destination,
              header_comments: Sequence[str] = ()) -> None:
    """Write records as CSV to a path or text stream ('.' decimals, '\\n' endings)."""
    text = render_csv(records, header_comments)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path}: {exc}") from exc
