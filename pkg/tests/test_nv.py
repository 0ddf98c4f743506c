import pytest
import sympy as sp

from moutardnv.algebra import GR_I, MPoly, RationalFn
from moutardnv.errors import (NotEvolved, NotHolomorphic, PoleError,
                              SingularBeforeBlowup)
from moutardnv.faddeev import build_faddeev, residual, scattering_data
from moutardnv.moutard import SeedPair, double_w
from moutardnv import nv

from conftest import T, Z, ZB, from_sympy, gr, poly


RAW_Q = poly({
    (0, 0, 1): ("12", "-12"),
    (3, 0, 0): ("-1", "0"),
    (2, 2, 0): ("-3", "3"),
    (2, 1, 0): ("0", "3"),
    (1, 2, 0): ("-3", "0"),
    (0, 3, 0): ("0", "1"),
    (0, 0, 0): ("-30", "30"),
})

REF_U_NUM = from_sympy(6 * sp.I * (
    24 * T * (sp.I * ZB - sp.I * Z + Z + ZB) + 2 * sp.I * Z ** 4 * ZB
    + 4 * sp.I * Z ** 3 * ZB - 2 * sp.I * Z * ZB ** 4 - 4 * sp.I * Z * ZB ** 3
    + 60 * sp.I * Z - 60 * sp.I * ZB + 96 * T * Z * ZB + 2 * Z ** 4 * ZB + Z ** 4
    + 6 * Z ** 2 * ZB ** 2 + 2 * Z * ZB ** 4 - 240 * Z * ZB - 60 * Z + ZB ** 4
    - 60 * ZB))

REF_V_NUM = from_sympy(6 * sp.I * (
    24 * T * (sp.I * Z - sp.I * ZB + Z + ZB) + sp.I * Z ** 4
    + 4 * sp.I * Z ** 3 * ZB ** 2 - 12 * sp.I * Z ** 2 * ZB ** 3
    - 6 * sp.I * Z ** 2 * ZB ** 2 + 6 * sp.I * Z * ZB ** 4 - 60 * sp.I * Z
    + 2 * sp.I * ZB ** 5 + 5 * sp.I * ZB ** 4 + 60 * sp.I * ZB + 48 * T * ZB ** 2
    + 4 * Z ** 3 * ZB ** 2 + 4 * Z ** 3 * ZB + 12 * Z ** 2 * ZB ** 4
    + 12 * Z ** 2 * ZB ** 3 + 6 * Z * ZB ** 4 + 4 * Z * ZB ** 3 - 60 * Z
    - 2 * ZB ** 5 - 120 * ZB ** 2 - 60 * ZB))


def test_heat3_evolve_basics():
    z = MPoly.var_z()
    assert nv.heat3_evolve(z * z) == z * z
    assert nv.heat3_evolve(z ** 3) == z ** 3 + MPoly.var_t() * gr(6)
    assert nv.heat3_evolve(z ** 4) == z ** 4 + MPoly.var_t() * z * gr(24)
    with pytest.raises(NotHolomorphic):
        nv.heat3_evolve(MPoly.var_zbar())


def test_heat3_evolve_satisfies_flow_and_semigroup():
    z = MPoly.var_z()
    p = z ** 6 + z ** 4 * gr("1/3", "2") + z * gr(0, 1)
    q = nv.heat3_evolve(p)
    assert q.diff_t() == q.diff_z().diff_z().diff_z()
    nv.assert_evolved(q)
    # semigroup: shifting t by s equals evolving the t = s slice
    s = gr("2/7")
    shifted = _subs_t_shift(q, s)
    assert shifted == _evolve_from_slice(q, s)
    # commutes with d/dz
    assert nv.heat3_evolve(p.diff_z()) == q.diff_z()


def _subs_t_shift(q, s):
    # q(z, t + s) expanded exactly
    out = MPoly.zero()
    t, one = MPoly.var_t(), MPoly.const(1)
    for (i, j, k), c in q.terms.items():
        out = out + MPoly.monomial(i, j, 0, c) * ((t + one * s) ** k)
    return out


def _evolve_from_slice(q, s):
    return nv.heat3_evolve(q.subs_t(s))


def test_assert_evolved_rejects_static_cubic():
    with pytest.raises(NotEvolved):
        nv.assert_evolved(MPoly.var_z() ** 3 + MPoly.var_t())


def test_extended_w_reference(seed32):
    wt = nv.extended_w(seed32)
    assert wt == RAW_Q * gr("1/3", "1/3")
    assert wt.is_real_valued()


def test_extended_w_t0_slice_is_static(seed32):
    wt = nv.extended_w(seed32)
    assert wt.subs_t(0) == double_w(seed32)


def test_extended_w_degenerate():
    p = MPoly.var_z() ** 2
    assert nv.extended_w(SeedPair(p, p, gr(5))) == MPoly.const(5)


def test_nv_potentials_reference(seed32):
    wt = nv.extended_w(seed32)
    sol = nv.nv_potentials(wt)
    q2 = RAW_Q * RAW_Q
    assert sol.u == RationalFn(REF_U_NUM, q2)
    assert sol.v == RationalFn(REF_V_NUM, q2)
    assert sol.u.is_real_valued()
    # vanishes at the origin for every t
    for k in range(REF_U_NUM.deg_t() + 1):
        assert sol.u.num.coeff(0, 0, k).is_zero()


def test_nv_constraint_exact(seed32):
    sol = nv.nv_potentials(nv.extended_w(seed32))
    assert sol.v.diff_zbar() == sol.u.diff_z()


def test_nv_residual_zero_for_construction(seed32):
    sol = nv.nv_potentials(nv.extended_w(seed32))
    assert nv.nv_residual(sol).is_zero()


def test_nv_residual_zero_for_trivial():
    sol = nv.nv_potentials(MPoly.const(1))
    assert sol.u.is_zero() and sol.v.is_zero()
    assert nv.nv_residual(sol).is_zero()


def test_nv_residual_nonzero_for_frozen_potential():
    # a static denominator outside the constructed class fails the evolution;
    # note 1 + z zb itself is stationary (it arises from degree-one data), so a
    # quartic is used here
    zzb = MPoly.var_z() * MPoly.var_zbar()
    wt = MPoly.const(1) + zzb + zzb * zzb
    sol = nv.nv_potentials(wt)
    r = nv.nv_residual(sol)
    assert not r.is_zero()
    assert abs(r.eval(0.5 + 0.2j, 0.0)) > 1e-12


def test_nv_faddeev_mu_reference(seed32):
    fw = nv.nv_faddeev(seed32)
    mus = nv.kernel_mu(fw)
    mu1_ref = RationalFn(from_sympy(6 * (-2 * sp.I * Z * ZB ** 2 - 2 * sp.I * Z * ZB
                                         + Z ** 2 + 2 * Z * ZB ** 2 + ZB ** 2)), RAW_Q)
    mu2_ref = RationalFn(from_sympy(12 * (sp.I * ZB ** 2 + sp.I * ZB - Z - ZB ** 2)), RAW_Q)
    assert mus[1] == mu1_ref
    assert mus[2] == mu2_ref


def test_nv_faddeev_scattering_stationary(seed32):
    fw = nv.nv_faddeev(seed32)
    sd = scattering_data(fw)
    assert sd.a_coeffs == {1: gr("-4")}      # exact, with no t anywhere in it
    assert sd.b_is_zero


def test_nv_faddeev_residuals(seed32):
    fw = nv.nv_faddeev(seed32)
    assert residual(fw).is_zero()
    assert nv.temporal_residual(fw).is_zero()


def test_nv_faddeev_t0_slice_matches_static(seed32):
    fw_t = nv.nv_faddeev(seed32)
    fw_s = build_faddeev(seed32)
    assert fw_t.w.subs_t(0) == fw_s.w
    assert set(fw_t.psi.coeffs) == set(fw_s.psi.coeffs)
    for k, f in fw_s.psi.coeffs.items():
        assert fw_t.psi.coeffs[k].subs_t(0) == f


def test_temporal_residual_detects_frozen_wave(seed32):
    from moutardnv.exppoly import WaveFn
    from moutardnv.faddeev import FaddeevWave
    fw = nv.nv_faddeev(seed32)
    frozen = WaveFn({k: f.subs_t(0) for k, f in fw.psi.coeffs.items()},
                    time_phase=True, den=fw.w.subs_t(0))
    broken = FaddeevWave(frozen, fw.u, fw.w.subs_t(0))
    assert not nv.temporal_residual(broken).is_zero()


def test_blowup_reference(seed32):
    wt = nv.extended_w(seed32)
    rep = nv.blowup_time(wt)
    assert rep.found
    assert abs(rep.t_star - 29.0 / 12.0) < 1e-6
    x, y = rep.witness
    near = min(abs(x + 1) + abs(y), abs(x) + abs(y + 1))
    assert near < 1e-4
    assert rep.spread is not None and rep.spread < 1e-6


def test_blowup_trivial_cases():
    t, one = MPoly.var_t(), MPoly.const(1)
    rep = nv.blowup_time(t - one)
    assert rep.found and abs(rep.t_star - 1.0) < 1e-9
    zzb = MPoly.var_z() * MPoly.var_zbar()
    rep2 = nv.blowup_time(t + one + zzb, t_max=5.0)
    assert not rep2.found
    rep3 = nv.blowup_time(zzb - one + t)
    assert rep3.found and rep3.t_star == 0.0


def test_normalize_real(seed32):
    q = nv.normalize_real(RAW_Q)
    assert q.is_real_valued()
    assert set(q.terms) == set(RAW_Q.terms)
    with pytest.raises(ValueError):
        nv.normalize_real(MPoly.var_z() + MPoly.const(1))


def test_mu2_integrability_report(seed32):
    fw = nv.nv_faddeev(seed32)
    sol = nv.nv_potentials(fw.w)
    rep = nv.mu2_integrability(sol, fw, [0.0, 2.0], r_outer=40.0, t_star=29 / 12)
    assert rep.harmonic_real and rep.harmonic_imag
    assert rep.decay_exponent == -2
    assert len(rep.entries) == 2
    for e in rep.entries:
        assert e.l2_full > 0
        # the tail adds little: the integrand decays like 1/|z|^4
        assert e.increment < 0.05 * e.l2_full
    # norms grow toward the critical time
    assert rep.entries[1].l2_full > rep.entries[0].l2_full


def test_mu2_integrability_singularities(seed32):
    fw = nv.nv_faddeev(seed32)
    sol = nv.nv_potentials(fw.w)
    with pytest.raises(SingularBeforeBlowup):
        nv.mu2_integrability(sol, fw, [3.0], t_star=10.0)
    with pytest.raises(PoleError):
        nv.mu2_integrability(sol, fw, [29 / 12], t_star=None)
