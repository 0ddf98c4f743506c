"""Zero-energy eigenfunctions with exponential asymptotics: the cubic
superposition, exact residuals, and scattering-data extraction."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .algebra import (GR_I, GaussianRational, MPoly, PowerFrac, RationalFn)
from .errors import AsymptoticMismatch, PoleError, ResidualNonzero
from .exppoly import (WaveFn, wave_diff_z, wave_diff_zbar, wave_eval)
from .moutard import MoutardFrame, SeedPair, build_frame, moutard_transform_wave


@dataclass
class FaddeevWave:
    """A wave solving (-4 d dbar + u) psi = 0 exactly.

    psi holds the multiplier slots over the shared denominator w; u is always
    -2*Laplacian(log w).  conjugate marks the e^{lam zb} branch obtained by the
    global swap symmetry.
    """

    psi: WaveFn
    u: RationalFn
    w: MPoly
    conjugate: bool = False


@dataclass
class ScatteringData:
    """Leading asymptotic coefficients: A as an exact Laurent sum in lam, B = 0
    structurally for every wave in the constructed class."""

    a_coeffs: dict = field(default_factory=dict)     # k >= 1 -> GaussianRational (lam^-k)

    @property
    def b_is_zero(self) -> bool:
        return True

    def a_at(self, lam0: complex) -> complex:
        return sum(complex(c) * complex(lam0) ** (-k) for k, c in self.a_coeffs.items())

    def format_a(self) -> str:
        if not self.a_coeffs:
            return "0"
        parts = []
        for k in sorted(self.a_coeffs):
            c = self.a_coeffs[k]
            lam = "λ" if k == 1 else f"λ^{k}"
            parts.append(f"{c}/{lam}")
        return " + ".join(parts)

    def __str__(self):
        return f"A={self.format_a()} B=0"


def faddeev_superpose(frame: MoutardFrame, psi1: WaveFn, psi2: WaveFn) -> FaddeevWave:
    """psi = e^{lam z} + (omega2/theta1)(psi2 - psi1), assembled over W.

    psi_j must be the transforms of the free wave by omega_j (slots over the
    denominator omega_j); the omega_j denominators cancel exactly in the
    combination, which is asserted.
    """
    w = frame.w
    if psi1.den != frame.omega1 or psi2.den != frame.omega2:
        raise ValueError("psi_j must come from the omega_j transforms")
    if psi1.time_phase != psi2.time_phase:
        raise ValueError("mixed phases")
    r1 = WaveFn(psi1.coeffs, psi1.time_phase)      # omega1 * psi1, polynomial slots
    r2 = WaveFn(psi2.coeffs, psi2.time_phase)
    combo = r2.scale(frame.omega1) - r1.scale(frame.omega2)
    if not combo.slot(0).is_zero():
        raise ResidualNonzero("omega denominators failed to cancel in the superposition")
    coeffs = dict(combo.coeffs)
    coeffs[0] = w                                  # the leading 1, over the common denominator
    psi = WaveFn(coeffs, psi1.time_phase, den=w)
    fw = FaddeevWave(psi, frame.u, w)
    res = residual(fw)
    if not res.is_zero():
        raise ResidualNonzero(f"superposed wave is not an exact eigenfunction: {res}")
    return fw


def residual(fw: FaddeevWave) -> MPoly:
    """Cleared numerator of (-4 d dbar + u) psi.

    Every lam-slot must clear; returns the zero polynomial exactly when psi is
    an eigenfunction, else the first nonzero slot's numerator.
    """
    if fw.psi.den is not None and fw.psi.den != fw.w:
        raise ValueError("wave denominator must match the stored w")
    base = fw.w
    k0 = 1 if fw.psi.den is not None else 0
    mult = WaveFn({k: PowerFrac(f if isinstance(f, MPoly) else f.num, base, k0)
                   for k, f in fw.psi.coeffs.items()}, fw.psi.time_phase)
    lap = wave_diff_z(wave_diff_zbar(mult))
    u_num = (base * base.diff_z().diff_zbar() - base.diff_z() * base.diff_zbar()) * (-8)
    u_pf = PowerFrac(u_num, base, 2)
    res_wave = lap.scale(-4) + mult.scale(u_pf)
    for k in sorted(res_wave.coeffs):
        f = res_wave.coeffs[k]
        num = f.num if isinstance(f, PowerFrac) else f
        if not num.is_zero():
            return num
    return MPoly.zero()


def build_faddeev(seed: SeedPair, conjugate: bool = False) -> FaddeevWave:
    """Run the whole static pipeline: frame, two wave transforms, superposition."""
    if conjugate:
        cseed = SeedPair(_conj_coeffs(seed.p1), _conj_coeffs(seed.p2), seed.c)
        fw = build_faddeev(cseed, conjugate=False)
        psi = WaveFn({k: f.conj_swap() for k, f in fw.psi.coeffs.items()},
                     fw.psi.time_phase, den=fw.w.conj_swap())
        return FaddeevWave(psi, fw.u.conj_swap(), fw.w.conj_swap(), conjugate=True)
    frame = build_frame(seed)
    free = WaveFn.free()
    psi1 = moutard_transform_wave(frame.omega1, free)
    psi2 = moutard_transform_wave(frame.omega2, free)
    return faddeev_superpose(frame, psi1, psi2)


def _conj_coeffs(p: MPoly) -> MPoly:
    return MPoly({e: c.conjugate() for e, c in p.terms.items()})


def scattering_data(fw: FaddeevWave, validate: bool = True,
                    ray_radius: float = 1e3, ray_tol: float = 0.05) -> ScatteringData:
    """Exact extraction of A(lam) from degree-leading coefficients, with an
    independent numeric ray-fit validation.  B = 0 structurally: no conjugate
    exponential can arise from rational multipliers."""
    w = fw.w
    if w.is_constant():
        for k in fw.psi.coeffs:
            if k != 0:
                raise AsymptoticMismatch("nontrivial slots over a constant denominator")
        return ScatteringData({})
    d = w.total_degree_space()
    lead = w.spatial_leading_terms()
    if len(lead) != 1:
        raise AsymptoticMismatch("denominator leading form is not a single monomial")
    (a, b), lead_poly = next(iter(lead.items()))
    if lead_poly.deg_t() > 0:
        raise AsymptoticMismatch("denominator leading coefficient depends on t")
    lead_c = lead_poly.constant_term()

    a_coeffs = {}
    for k, num in sorted(fw.psi.coeffs.items()):
        if k == 0:
            if num != w:
                raise AsymptoticMismatch("slot 0 is not normalized to 1")
            continue
        if num.total_degree_space() > d - 1:
            raise AsymptoticMismatch(f"slot {k} numerator does not decay")
        contrib = None
        for (i, j, p), c in num.terms.items():
            if i + j == d - 1:
                if (i, j) != (a - 1, b) or p > 0:
                    raise AsymptoticMismatch(
                        f"slot {k} has a non-radial leading term z^{i} zb^{j} t^{p}")
                contrib = c
        if contrib is not None:
            a_coeffs[k] = contrib / lead_c
    sd = ScatteringData(a_coeffs)
    if validate:
        _validate_rays(fw, sd, ray_radius, ray_tol)
    return sd


def _validate_rays(fw: FaddeevWave, sd: ScatteringData, radius: float, tol: float):
    for lam0 in (1.0, 0.7 + 0.4j):
        expected = sd.a_at(lam0)
        for m in range(6):
            ang = m * cmath.pi / 3 + 0.1
            z0 = radius * cmath.exp(1j * ang)
            try:
                mval = _multiplier_value(fw, z0, 0.0, lam0)
            except PoleError:
                continue
            got = z0 * (mval - 1.0)
            if abs(got - expected) > tol:
                raise AsymptoticMismatch(
                    f"ray fit at z={z0}, lam={lam0}: {got} vs exact {expected}")


def _multiplier_value(fw: FaddeevWave, z0: complex, t0: float, lam0: complex) -> complex:
    """Value of psi * e^{-phase}: the rational multiplier alone."""
    dv = fw.w.eval(z0, t0) if fw.psi.den is not None else 1.0
    if fw.psi.den is not None and abs(dv) < 1e-300:
        raise PoleError("denominator zero")
    total = 0.0 + 0.0j
    for k, f in fw.psi.coeffs.items():
        total += complex(lam0) ** (-k) * f.eval(z0, t0)
    return total / dv


def faddeev_eval(fw: FaddeevWave, z0: complex, t0: float = 0.0, lam0: complex = 1.0) -> complex:
    """Numeric value of the wave, honoring the conjugate-branch flag."""
    if not fw.conjugate:
        return wave_eval(fw.psi, z0, t0, lam0)
    lam0 = complex(lam0)
    phase = lam0 * complex(z0).conjugate()
    if fw.psi.time_phase:
        phase += lam0 ** 3 * t0
    return cmath.exp(phase) * _multiplier_value(fw, z0, t0, lam0)


def assert_decay_bookkeeping(fw: FaddeevWave) -> None:
    """deg(numerator_k) <= deg(w) - 1 for all k >= 1: the exact decay statement."""
    d = fw.w.total_degree_space()
    for k, num in fw.psi.coeffs.items():
        if k == 0:
            continue
        if num.total_degree_space() > d - 1:
            raise AsymptoticMismatch(f"slot {k} violates degree bookkeeping")
