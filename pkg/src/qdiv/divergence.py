"""Distinguishability functionals on positive operators.

Each quantity is computed from snapped spectral data, so support conditions
(the +inf branches) are decided by ranks, never by numeric overflow.  Where
two formulations exist (spectral double sum vs. superoperator form), both are
implemented so they can cross-check each other.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from . import matrixcore as mc
from .extended import INF, ExtendedReal
from .functions import DomainError, ScalarFunctionSpec, spec_from_name
from .operators import PositiveOperator, ValidationError, as_density, as_positive

# Trace overlaps below this count as zero in the 0*inf convention.
WEIGHT_TOL = 1e-12
# Support containment / orthogonality decisions, on projector trace defects.
SUPPORT_TRACE_TOL = 1e-8
# Imaginary parts of projector-product traces must stay below this.
IMAG_TOL = 1e-10
# Eigenvalues of derived PSD products below this (relative) are noise.
EIG_SNAP = 1e-13


def support_contains(outer: PositiveOperator, inner: PositiveOperator,
                     tol: float = SUPPORT_TRACE_TOL) -> bool:
    """Whether supp(inner) is contained in supp(outer)."""
    pi = inner.support_projection
    po = outer.support_projection
    defect = float(np.trace(pi).real) - mc.hs_inner(pi, po).real
    return defect <= tol


def supports_orthogonal(a: PositiveOperator, b: PositiveOperator,
                        tol: float = SUPPORT_TRACE_TOL) -> bool:
    """Whether the supports of a and b are orthogonal subspaces."""
    overlap = mc.hs_inner(a.support_projection, b.support_projection).real
    return overlap <= tol


def _projector_overlap(p: np.ndarray, q: np.ndarray) -> float:
    """tr(PQ) for Hermitian projections, asserted real, clamped at zero."""
    val = mc.hs_inner(p, q)
    if abs(val.imag) > IMAG_TOL:
        raise ArithmeticError(
            f"projector product trace has imaginary part {val.imag:.3e}"
        )
    return max(val.real, 0.0)


def _snapped_psd_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a PSD product: clamped at 0, noise floor snapped to 0."""
    evals, _ = mc.eig_hermitian(mc.hermitian_part(m))
    evals = np.clip(evals, 0.0, None)
    top = float(evals[-1]) if evals.size else 0.0
    evals[evals <= EIG_SNAP * max(top, 1.0)] = 0.0
    return evals


def _f_at_zero_term(f: ScalarFunctionSpec):
    """Value of f at 0, or None when the one-sided limit is +inf."""
    if f.value_at_zero is not None:
        return f.value_at_zero
    if f.limit_at_zero is not None:
        if f.limit_at_zero.is_inf:
            return None
        return f.limit_at_zero.value
    raise DomainError(f"{f.name}: undefined at the required ratio 0")


def f_divergence(a, b, f: ScalarFunctionSpec) -> ExtendedReal:
    """Spectral double-sum form of the quantum f-divergence.

    Sums b*f(a/b) weighted by the overlaps of spectral projections over the
    nonzero spectrum of B, plus the slope-at-infinity term gamma * a * tr(P_a Q_0)
    against the kernel of B, with 0*inf = 0.
    """
    a = as_positive(a)
    b = as_positive(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    if f.gamma is None:
        raise DomainError(f"{f.name}: slope at infinity (gamma) is undeclared")

    q_zero = None
    zero_parts = [c.projection for c in b.clusters.clusters if c.eigenvalue == 0.0]
    if zero_parts:
        q_zero = sum(zero_parts)

    total = 0.0
    inf_hit = False
    for ca in a.clusters.clusters:
        la, pa = ca.eigenvalue, ca.projection
        for cb in b.clusters.clusters:
            lb, qb = cb.eigenvalue, cb.projection
            if lb == 0.0:
                continue
            w = _projector_overlap(pa, qb)
            if w <= WEIGHT_TOL:
                continue
            if la == 0.0:
                f0 = _f_at_zero_term(f)
                if f0 is None:
                    inf_hit = True
                    continue
                total += lb * f0 * w
            else:
                total += lb * f(la / lb) * w
        if q_zero is not None and la > 0.0:
            w0 = _projector_overlap(pa, q_zero)
            if w0 > WEIGHT_TOL:
                if f.gamma.is_inf:
                    inf_hit = True
                else:
                    total += f.gamma.value * la * w0
    return INF if inf_hit else ExtendedReal(total)


def f_divergence_superop(a, b, f: ScalarFunctionSpec) -> float:
    """Superoperator form: <sqrt(B), f(L_A R_{B^-1}) sqrt(B)> in HS geometry.

    Requires invertible B.  Must agree with the spectral double sum; the pair
    is kept as a dual-route cross-check.
    """
    a = as_positive(a)
    b = as_positive(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    if not b.definite:
        raise ValidationError("second operator must be positive definite")
    binv = b.pseudo_power(-1.0)
    sup = mc.superop_lr(a.matrix, binv)
    evals, vecs = mc.eig_hermitian(mc.hermitian_part(sup.matrix))
    evals = np.clip(evals, 0.0, None)
    top = float(evals[-1]) if evals.size else 0.0
    evals[evals <= EIG_SNAP * max(top, 1.0)] = 0.0
    fvals = np.array([f(v) if v > 0.0 else _require_zero_value(f) for v in evals])
    mf = (vecs * fvals) @ vecs.conj().T
    s = mc.vec(b.sqrt())
    out = complex(np.vdot(s, mf @ s))
    # roundoff in the imaginary part grows with the size of f on the spectrum
    scale = float(np.max(np.abs(fvals), initial=0.0)) * float(np.vdot(s, s).real)
    if abs(out.imag) > 1e-10 * max(1.0, scale):
        raise ArithmeticError("superoperator value has a large imaginary part")
    return float(out.real)


def _require_zero_value(f: ScalarFunctionSpec) -> float:
    f0 = _f_at_zero_term(f)
    if f0 is None:
        raise DomainError(f"{f.name}: diverges at 0 but a zero ratio occurred")
    return f0


def umegaki(a, b) -> ExtendedReal:
    """Relative entropy tr A(log A - log B), +inf unless supp A <= supp B."""
    a = as_density(a)
    b = as_density(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    if not support_contains(b, a):
        return INF
    ev = a.eigenvalues
    term_a = float(np.sum(ev[ev > 0.0] * np.log(ev[ev > 0.0])))
    term_b = 0.0
    for c in b.clusters.clusters:
        if c.eigenvalue == 0.0:
            continue
        term_b += math.log(c.eigenvalue) * mc.hs_inner(a.matrix, c.projection).real
    return ExtendedReal(term_a - term_b)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0.0) or alpha == 1.0:
        raise ValueError(f"alpha must lie in (0,1) or (1,inf), got {alpha}")
    return alpha


def renyi_traditional(a, b, alpha: float) -> ExtendedReal:
    """(alpha-1)^-1 log tr(A^alpha B^(1-alpha)) with the support case split."""
    alpha = _check_alpha(alpha)
    a = as_density(a)
    b = as_density(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    if alpha < 1.0:
        if supports_orthogonal(a, b):
            return INF
    else:
        if not support_contains(b, a):
            return INF
    t = float(np.trace(a.pseudo_power(alpha) @ b.pseudo_power(1.0 - alpha)).real)
    if t <= 0.0:
        raise ArithmeticError("trace term vanished outside the infinite branch")
    return ExtendedReal(math.log(t) / (alpha - 1.0))


def sandwiched_core(a, b, alpha: float) -> ExtendedReal:
    """tr (B^e A B^e)^alpha with e = (1-alpha)/(2 alpha), powers on supports.

    For alpha > 1 the value is +inf unless supp A <= supp B; for alpha < 1 the
    compression to supp B is built into the pseudo-powers.
    """
    alpha = _check_alpha(alpha)
    a = as_positive(a)
    b = as_positive(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    if alpha > 1.0 and not support_contains(b, a):
        return INF
    e = (1.0 - alpha) / (2.0 * alpha)
    bp = b.pseudo_power(e)
    evals = _snapped_psd_eigenvalues(bp @ a.matrix @ bp)
    pos = evals[evals > 0.0]
    return ExtendedReal(float(np.sum(pos**alpha)))


def sandwiched_renyi(a, b, alpha: float) -> ExtendedReal:
    """The quantum Renyi divergence with (tr A)^-1 normalization."""
    alpha = _check_alpha(alpha)
    a = as_positive(a)
    b = as_positive(b)
    if a.rank == 0 or b.rank == 0:
        raise ValidationError("operators must be nonzero")
    if alpha < 1.0:
        if supports_orthogonal(a, b):
            return INF
    else:
        if not support_contains(b, a):
            return INF
    core = sandwiched_core(a, b, alpha)
    if core.is_inf:
        return INF
    ratio = core.value / a.trace
    if ratio <= 0.0:
        raise ArithmeticError("core trace vanished outside the infinite branch")
    return ExtendedReal(math.log(ratio) / (alpha - 1.0))


def _require_g(g: ScalarFunctionSpec) -> None:
    if g.value_at_zero is None or g.value_at_zero != 0.0:
        raise DomainError(f"{g.name}: outer function must satisfy g(0) = 0")


def _dab_on_support(a: PositiveOperator, b: PositiveOperator,
                    f: ScalarFunctionSpec, g: ScalarFunctionSpec) -> float:
    """tr g(f(B0) A0 f(B0)) on supp B, with A0 the compression of A."""
    mask = b.eigenvalues > 0.0
    if not np.any(mask):
        return 0.0
    vb = b.eigenvectors[:, mask]
    fb = np.array([f(t) for t in b.eigenvalues[mask]])
    a0 = vb.conj().T @ a.matrix @ vb
    s0 = (fb[:, None] * a0) * fb[None, :]
    evals = _snapped_psd_eigenvalues(s0)
    return float(np.sum([g(v) for v in evals]))


def d_fg(a, b, f: ScalarFunctionSpec, g: ScalarFunctionSpec) -> ExtendedReal:
    """Generalized quantity tr g(f(B) A f(B)), extended to singular B.

    For invertible B this is a plain trace.  For singular B the declared limit
    of f at 0+ selects the extension: limit 0 compresses to supp B; limit +inf
    (with g strictly increasing and unbounded) is finite exactly when
    supp A <= supp B and +inf otherwise.
    """
    a = as_positive(a)
    b = as_positive(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    _require_g(g)
    if not b.definite:
        if f.limit_at_zero is None:
            raise DomainError(
                f"{f.name}: limit at 0+ must be declared for singular arguments"
            )
        if f.limit_at_zero.is_inf:
            if not (g.strictly_increasing and g.diverges_at_infinity):
                raise DomainError(
                    f"{g.name}: must be strictly increasing and unbounded "
                    "when f diverges at 0+"
                )
            if not support_contains(b, a):
                return INF
        elif f.limit_at_zero.value != 0.0:
            raise DomainError(
                f"{f.name}: finite nonzero limit at 0+ has no defined extension"
            )
    return ExtendedReal(_dab_on_support(a, b, f, g))


def d_fg_limit_probe(a, b, f: ScalarFunctionSpec, g: ScalarFunctionSpec,
                     eps_schedule, cap: float = 1e12):
    """Evaluate tr g(f(B+eps I) A f(B+eps I)) along a decreasing schedule.

    Returns ``(values, estimate)`` where the estimate is the last value, or
    +inf when the values cross ``cap`` and keep growing from that point on.
    The probe is a diagnostic for the rank-based extension, not its definition.
    """
    a = as_positive(a)
    b = as_positive(b)
    if a.dim != b.dim:
        raise ValueError("dimension mismatch between the two operators")
    _require_g(g)
    schedule = [float(e) for e in eps_schedule]
    if not schedule or any(e <= 0.0 for e in schedule):
        raise ValueError("schedule must be a nonempty list of positive numbers")
    if any(y >= x for x, y in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")

    vecs = b.eigenvectors
    values = []
    for eps in schedule:
        fb = np.array([f(t + eps) for t in b.eigenvalues])
        fmat = (vecs * fb) @ vecs.conj().T
        evals = _snapped_psd_eigenvalues(fmat @ a.matrix @ fmat.conj().T)
        values.append(float(np.sum([g(v) for v in evals])))

    crossing = next((i for i, v in enumerate(values) if v > cap), None)
    diverged = crossing is not None and all(
        values[i + 1] >= values[i] for i in range(crossing, len(values) - 1)
    )
    estimate = INF if diverged else ExtendedReal(values[-1])
    return values, estimate


# Dispatch used by the command line and the invariance harness.
DIVERGENCE_TAGS = ("umegaki", "renyi", "sandwiched", "sandwiched-core", "fdiv", "dfg")


def make_divergence(tag: str, alpha: Optional[float] = None,
                    f=None, g=None) -> Callable:
    """Resolve a divergence tag plus parameters into a two-argument callable.

    ``f`` and ``g`` may be ScalarFunctionSpec instances or registry names like
    ``power:2``.  Unknown tags or missing parameters raise KeyError.
    """
    if isinstance(f, str):
        f = spec_from_name(f)
    if isinstance(g, str):
        g = spec_from_name(g)
    if tag == "umegaki":
        return umegaki
    if tag == "renyi":
        if alpha is None:
            raise KeyError("renyi needs --alpha")
        return lambda a, b: renyi_traditional(a, b, alpha)
    if tag == "sandwiched":
        if alpha is None:
            raise KeyError("sandwiched needs --alpha")
        return lambda a, b: sandwiched_renyi(a, b, alpha)
    if tag == "sandwiched-core":
        if alpha is None:
            raise KeyError("sandwiched-core needs --alpha")
        return lambda a, b: sandwiched_core(a, b, alpha)
    if tag == "fdiv":
        if f is None:
            raise KeyError("fdiv needs --f")
        return lambda a, b: f_divergence(a, b, f)
    if tag == "dfg":
        if f is None or g is None:
            raise KeyError("dfg needs --f and --g")
        return lambda a, b: d_fg(a, b, f, g)
    raise KeyError(f"unknown divergence tag {tag!r} (have: {DIVERGENCE_TAGS})")
