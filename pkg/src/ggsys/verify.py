"""Residual harness: numerically certify that evaluators solve their systems.

All checks share the same reporting shape: the maximum absolute residual
over a seeded sample set, normalized by the largest function value seen, and
a pass flag at a relative tolerance (default 1e-8).  Sample draws avoid the
neighborhoods of gamma poles; arguments on base positions stay positive so
principal powers are unambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError
from .model import VectorSet, ReducedSystem, build_reduced_system, enumerate_bases, select_base
from .series import SeriesSpec, TruncatedSeries, gauss_coefficients, gg_series_eval, reduced_series

DEFAULT_TOLERANCE = 1e-8
_FLOOR = 1e-300


@dataclass(frozen=True)
class ResidualReport:
    equation_id: str
    max_abs_residual: float
    max_rel_residual: float
    sample_points: int
    tolerance: float
    passed: bool


def _report(equation_id, residuals, scale, tolerance) -> ResidualReport:
    max_abs = float(max(residuals)) if residuals else 0.0
    max_rel = max_abs / float(max(scale, _FLOOR))
    return ResidualReport(
        equation_id, max_abs, max_rel, len(residuals), tolerance, bool(max_rel <= tolerance)
    )


def _draw_off_integer(rng, size) -> np.ndarray:
    """Complex coordinates in [0.2, 1.8] x i[-0.3, 0.3], away from integers."""
    out = np.empty(size, dtype=np.complex128)
    for idx in np.ndindex(*out.shape):
        while True:
            z = rng.uniform(0.2, 1.8) + 1j * rng.uniform(-0.3, 0.3)
            if abs(z - round(z.real)) >= 0.05:
                out[idx] = z
                break
    return out


def _disk(rng, bound) -> complex:
    radius = bound * np.sqrt(rng.uniform())
    angle = rng.uniform(0.0, 2 * np.pi)
    return radius * np.exp(1j * angle)


def sample_parameters(system: ReducedSystem, count: int, rng) -> list[np.ndarray]:
    """Ambient parameter vectors whose base coordinates follow the box policy."""
    cols = system.base.parent.rows(system.base.I).T
    return [cols @ _draw_off_integer(rng, (system.base.parent.n,)) for _ in range(count)]


def sample_arguments(
    system: ReducedSystem, count: int, rng, x_bound: float = 0.3
) -> list[np.ndarray]:
    """Argument vectors: positive on the base, sized on the rest so that the
    invariant variables land inside |x| <= x_bound."""
    base = system.base
    N = base.parent.N
    out = []
    for _ in range(count):
        a = np.zeros(N, dtype=np.complex128)
        ipos = [i - 1 for i in base.I]
        a[ipos] = rng.uniform(0.5, 1.5, size=len(ipos))
        for row, j in enumerate(base.J):
            x_j = _disk(rng, x_bound)
            a[j - 1] = x_j * np.prod(a[ipos] ** system.off_base_coords[row])
        out.append(a)
    return out


def _call(f, beta, a_or_x):
    try:
        return complex(f(beta, a_or_x))
    except Exception as exc:
        raise RuntimeError(
            f"evaluator failed at parameters {np.asarray(beta)} and "
            f"argument {np.asarray(a_or_x)}"
        ) from exc


def _fd_step(component: complex) -> float:
    return 1e-6 * max(abs(component), 1.0)


def check_gg_system(
    f,
    A: VectorSet,
    samples: int = 20,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    base=None,
    x_bound: float = 0.3,
) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the defining system for an evaluator f(beta, a).

    First report: every partial derivative in a_j (central differences)
    matches the parameter shift by -omega^j.  Second report: the weighted
    sum of shifts reproduces beta times the function, checked directly with
    no differentiation.
    """
    rng = np.random.default_rng(seed)
    system = build_reduced_system(
        select_base(A, base) if base is not None else enumerate_bases(A)[0]
    )
    betas = sample_parameters(system, samples, rng)
    args = sample_arguments(system, samples, rng, x_bound)
    shift_res, weighted_res = [], []
    scale = _FLOOR
    for beta, a in zip(betas, args):
        f0 = _call(f, beta, a)
        scale = max(scale, abs(f0))
        weighted = -np.asarray(beta, dtype=np.complex128) * f0
        for j in range(1, A.N + 1):
            h = _fd_step(a[j - 1])
            bump = np.zeros(A.N, dtype=np.complex128)
            bump[j - 1] = h
            fd = (_call(f, beta, a + bump) - _call(f, beta, a - bump)) / (2 * h)
            shifted = _call(f, beta - A.row(j), a)
            shift_res.append(abs(fd - shifted))
            weighted += a[j - 1] * shifted * A.row(j)
        weighted_res.append(float(np.max(np.abs(weighted))))
    return (
        _report("derivative-shift", shift_res, scale, tolerance),
        _report("weighted-shift", weighted_res, scale, tolerance),
    )


def gg_forms_agreement(
    f,
    A: VectorSet,
    samples: int = 20,
    seed: int = 0,
    tolerance: float = 1e-9,
    base=None,
    x_bound: float = 0.3,
) -> ResidualReport:
    """The derivative-weighted and shift-weighted forms of the system agree:
    sum_j a_j (df/da_j) omega^j equals sum_j a_j f(beta - omega^j) omega^j."""
    rng = np.random.default_rng(seed)
    system = build_reduced_system(
        select_base(A, base) if base is not None else enumerate_bases(A)[0]
    )
    betas = sample_parameters(system, samples, rng)
    args = sample_arguments(system, samples, rng, x_bound)
    residuals = []
    scale = _FLOOR
    for beta, a in zip(betas, args):
        scale = max(scale, abs(_call(f, beta, a)))
        diff = np.zeros(A.n, dtype=np.complex128)
        for j in range(1, A.N + 1):
            h = _fd_step(a[j - 1])
            bump = np.zeros(A.N, dtype=np.complex128)
            bump[j - 1] = h
            fd = (_call(f, beta, a + bump) - _call(f, beta, a - bump)) / (2 * h)
            diff += a[j - 1] * (fd - _call(f, beta - A.row(j), a)) * A.row(j)
        residuals.append(float(np.max(np.abs(diff))))
    return _report("weighted-forms-agreement", residuals, scale, tolerance)


def check_def2_system(
    F,
    size: int,
    relation_rows,
    samples: int = 20,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    derivative=None,
    lattice_shifts=None,
) -> tuple[ResidualReport, ResidualReport, ResidualReport]:
    """Residuals of the subspace form of the system for F(gamma, a).

    ``relation_rows`` spans the relation subspace (empty sequence for the
    zero subspace).  Three reports: partial derivatives against unit shifts
    of gamma; periodicity of F under integer shifts inside the subspace;
    and the pairing identity against vectors annihilating the subspace
    under the plain (bilinear, no conjugation) pairing.

    ``derivative(gamma, a, i)`` may supply exact partials; the default is
    central differences, whose noise floor sits near 5e-11.
    """
    rng = np.random.default_rng(seed)
    rows = np.asarray(
        relation_rows if len(relation_rows) else np.zeros((0, size)),
        dtype=np.complex128,
    )
    if rows.shape[1] != size:
        raise InvalidInputError("relation rows have the wrong width")

    if lattice_shifts is None:
        integral = np.all(np.abs(rows - np.round(rows.real)) < 1e-12)
        lattice_shifts = [np.round(r.real).astype(int) for r in rows] if integral else []

    if rows.shape[0] == 0:
        annihilators = [np.eye(size)[i] for i in range(size)]
    else:
        _, s, Vh = np.linalg.svd(rows, full_matrices=True)
        rank = int(np.sum(s > 1e-10 * max(1.0, float(s[0]))))
        annihilators = [Vh[k].conj() for k in range(rank, size)]

    eye = np.eye(size)
    deriv_res, period_res, pairing_res = [], [], []
    scale = _FLOOR
    for _ in range(samples):
        gamma = _draw_off_integer(rng, (size,))
        a = rng.uniform(0.5, 1.5, size=size).astype(np.complex128)
        f0 = _call(F, gamma, a)
        scale = max(scale, abs(f0))
        for i in range(size):
            if derivative is not None:
                d = complex(derivative(gamma, a, i + 1))
            else:
                h = _fd_step(a[i])
                d = (_call(F, gamma, a + h * eye[i]) - _call(F, gamma, a - h * eye[i])) / (
                    2 * h
                )
            deriv_res.append(abs(d - _call(F, gamma - eye[i], a)))
        for shift in lattice_shifts:
            period_res.append(abs(_call(F, gamma + np.asarray(shift), a) - f0))
        for nu in annihilators:
            lhs = sum(
                nu[i] * a[i] * _call(F, gamma - eye[i], a) for i in range(size)
            )
            pairing_res.append(abs(lhs - np.dot(nu, gamma) * f0))
    return (
        _report("partial-shift", deriv_res, scale, tolerance),
        _report("relation-periodicity", period_res, scale, tolerance),
        _report("orthogonal-pairing", pairing_res, scale, tolerance),
    )


def check_reduced_system(
    F,
    system: ReducedSystem,
    samples: int = 20,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    mode: str = "exact",
    truncation: int = 20,
    x_bound: float = 0.3,
    points=None,
) -> tuple[ResidualReport, ResidualReport]:
    """Residuals of the reduced system in the invariant variables.

    mode="exact": F is a factory (beta, truncation) -> TruncatedSeries and
    derivatives are term-wise, so residuals measure floating noise only
    (shifted right-hand series are truncated one order lower where the
    identity demands it).  mode="fd": F is an evaluator (beta, x) -> complex
    and x-derivatives come from central differences.

    ``points`` overrides the sampler with explicit (beta, x) pairs, for
    evaluators whose domain excludes the default parameter box.
    """
    if mode not in ("exact", "fd"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    base = system.base
    A = base.parent
    if points is not None:
        betas = [np.asarray(b, dtype=np.complex128) for b, _ in points]
        xs = [np.asarray(x, dtype=np.complex128) for _, x in points]
    else:
        betas = sample_parameters(system, samples, rng)
        xs = [
            np.asarray([_disk(rng, x_bound) for _ in range(system.r)])
            for _ in range(samples)
        ]
    base_res, off_res = [], []
    scale = _FLOOR

    for beta, x in zip(betas, xs):
        if mode == "exact":
            S = F(beta, truncation)
            if not isinstance(S, TruncatedSeries):
                raise InvalidInputError("exact mode needs a TruncatedSeries factory")
            f0 = S.value(x).value
            scale = max(scale, abs(f0))
            beta_I = base.coords(beta)
            for pos, i in enumerate(base.I):
                lhs = beta_I[pos] * f0
                for row, j in enumerate(base.J):
                    lhs += (
                        system.l_on_base[row, pos] * x[row] * S.derivative(x, j)
                    )
                rhs = F(beta - A.row(i), truncation).value(x).value
                base_res.append(abs(lhs - rhs))
            for j in base.J:
                lhs = S.derivative(x, j)
                rhs = F(beta - A.row(j), truncation - 1).value(x).value
                off_res.append(abs(lhs - rhs))
        else:
            f0 = _call(F, beta, x)
            scale = max(scale, abs(f0))
            beta_I = base.coords(beta)

            def partial(b, row):
                h = _fd_step(x[row])
                bump = np.zeros(system.r, dtype=np.complex128)
                bump[row] = h
                return (_call(F, b, x + bump) - _call(F, b, x - bump)) / (2 * h)

            for pos, i in enumerate(base.I):
                lhs = beta_I[pos] * f0
                for row in range(system.r):
                    lhs += system.l_on_base[row, pos] * x[row] * partial(beta, row)
                base_res.append(abs(lhs - _call(F, beta - A.row(i), x)))
            for row, j in enumerate(base.J):
                off_res.append(abs(partial(beta, row) - _call(F, beta - A.row(j), x)))
    return (
        _report("reduced-base", base_res, scale, tolerance),
        _report("reduced-offbase", off_res, scale, tolerance),
    )


def _gauss_eval(coeffs: np.ndarray, x: complex) -> complex:
    return complex(np.polynomial.polynomial.polyval(x, coeffs))


def _gauss_deriv(coeffs: np.ndarray, x: complex, order: int = 1) -> complex:
    c = np.polynomial.polynomial.polyder(coeffs, order)
    return complex(np.polynomial.polynomial.polyval(x, c))


def check_gauss_relations(
    samples: int = 100,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    M: int = 40,
    x_bound: float = 0.3,
    points=None,
    perturbation: float = 0.0,
) -> tuple[ResidualReport, ResidualReport, ResidualReport, ResidualReport]:
    """Residuals of the four contiguous relations of the classical series.

    The c-relation is checked in the form (c-1) f + x f(a+1,b+1,c+1) =
    f(a,b,c-1); the coefficient identity (c-1+m) Gamma(a+m)Gamma(b+m) /
    Gamma(c+m) = Gamma(a+m)Gamma(b+m)/Gamma(c-1+m) forces the factor c-1.
    ``perturbation`` (negative-control hook) is added to c on the shifted
    side of that relation only.
    """
    rng = np.random.default_rng(seed)
    if points is None:
        points = [
            (
                rng.uniform(0.5, 2.0),
                rng.uniform(0.5, 2.0),
                rng.uniform(0.5, 2.0),
                _disk(rng, x_bound),
            )
            for _ in range(samples)
        ]
    res = {label: [] for label in ("derivative-up", "shift-a", "shift-b", "shift-c")}
    scale = _FLOOR
    for a, b, c, x in points:
        here = gauss_coefficients(a, b, c, M)
        plus = gauss_coefficients(a + 1, b + 1, c + 1, M - 1)
        f0 = _gauss_eval(here, x)
        fplus = _gauss_eval(plus, x)
        scale = max(scale, abs(f0))
        res["derivative-up"].append(abs(_gauss_deriv(here, x) - fplus))
        res["shift-a"].append(
            abs(a * f0 + x * fplus - _gauss_eval(gauss_coefficients(a + 1, b, c, M), x))
        )
        res["shift-b"].append(
            abs(b * f0 + x * fplus - _gauss_eval(gauss_coefficients(a, b + 1, c, M), x))
        )
        res["shift-c"].append(
            abs(
                (c - 1) * f0
                + x * fplus
                - _gauss_eval(gauss_coefficients(a, b, c - 1 + perturbation, M), x)
            )
        )
    return tuple(
        _report(label, values, scale, tolerance) for label, values in res.items()
    )


def check_gauss_ode(
    a,
    b,
    c,
    xs=None,
    samples: int = 50,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    M: int = 60,
    x_bound: float = 0.5,
    perturbation: float = 0.0,
) -> ResidualReport:
    """Residual of the second-order equation satisfied by the series:
    x(1-x) f'' + (c - (a+b+1)x) f' - a b f, derivatives term-wise.

    ``perturbation`` shifts b inside the equation coefficients only
    (negative-control hook)."""
    rng = np.random.default_rng(seed)
    if xs is None:
        xs = [_disk(rng, x_bound) for _ in range(samples)]
    coeffs = gauss_coefficients(a, b, c, M)
    bb = b + perturbation
    residuals = []
    scale = _FLOOR
    for x in xs:
        f0 = _gauss_eval(coeffs, x)
        d1 = _gauss_deriv(coeffs, x)
        d2 = _gauss_deriv(coeffs, x, 2)
        scale = max(scale, abs(f0))
        residuals.append(
            abs(x * (1 - x) * d2 + (c - (a + bb + 1) * x) * d1 - a * bb * f0)
        )
    return _report("hypergeometric-ode", residuals, scale, tolerance)


@dataclass(frozen=True)
class FamilyRankResult:
    rank: int
    singular_values: tuple[float, ...]
    report: ResidualReport
    scale_used: float


def solution_family_rank(
    A: VectorSet,
    family,
    samples: int = 10,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    truncation: int = 25,
    sv_threshold: float = 1e-8,
) -> FamilyRankResult:
    """Numeric rank of a candidate solution family at a fixed generic
    parameter, plus a residual report over every member.

    The family is a sequence of (base labels, twist) pairs.  A common
    evaluation domain is found by shrinking the off-base argument
    coordinates until every member's series tail is negligible at every
    sample; failure to find one raises DomainError.
    """
    family = [(tuple(I), tuple(k)) for I, k in family]
    if not family:
        raise InvalidInputError("empty candidate family")
    rng = np.random.default_rng(seed)
    systems = {I: build_reduced_system(select_base(A, I)) for I, _ in family}
    first = systems[family[0][0]]
    beta = sample_parameters(first, 1, rng)[0]

    off_base_labels = sorted(
        {j for system in systems.values() for j in system.base.J}
    )
    base_draw = rng.uniform(0.5, 1.5, size=(samples, A.N))
    off_draw = rng.uniform(0.2, 1.0, size=(samples, len(off_base_labels)))

    def argument_matrix(delta: float) -> np.ndarray:
        args = base_draw.astype(np.complex128).copy()
        for col, j in enumerate(off_base_labels):
            args[:, j - 1] = delta * off_draw[:, col]
        return args

    specs = {
        (I, k): SeriesSpec(systems[I], k, truncation, mode="full") for I, k in family
    }
    delta = 0.3
    matrix = None
    for _ in range(20):
        args = argument_matrix(delta)
        candidate = np.zeros((samples, len(family)), dtype=np.complex128)
        ok = True
        for col, member in enumerate(family):
            for row in range(samples):
                val = gg_series_eval(specs[member], beta, args[row])
                if val.tail_estimate > 1e-9 * max(abs(val.value), 1e-30):
                    ok = False
                    break
                candidate[row, col] = val.value
            if not ok:
                break
        if ok:
            matrix = candidate
            break
        delta /= 2
    if matrix is None:
        raise DomainError("no common convergence domain found for the family")

    svals = np.linalg.svd(matrix, compute_uv=False)
    top = float(svals[0]) if len(svals) else 0.0
    rank = int(np.sum(svals > sv_threshold * max(top, _FLOOR)))

    worst_abs, worst_rel, points = 0.0, 0.0, 0
    all_pass = True
    for idx, (I, k) in enumerate(family):
        spec = specs[(I, k)]

        def member(beta_arg, a_arg, spec=spec):
            return gg_series_eval(spec, beta_arg, a_arg).value

        r1, r2 = check_gg_system(
            member, A, samples=samples, seed=seed + idx + 1, tolerance=tolerance, base=I
        )
        for rep in (r1, r2):
            worst_abs = max(worst_abs, rep.max_abs_residual)
            worst_rel = max(worst_rel, rep.max_rel_residual)
            points += rep.sample_points
            all_pass = all_pass and rep.passed
    report = ResidualReport(
        "family-member-system", worst_abs, worst_rel, points, tolerance, all_pass
    )
    return FamilyRankResult(rank, tuple(float(s) for s in svals), report, delta)
