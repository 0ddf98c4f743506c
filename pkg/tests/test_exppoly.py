import cmath

import pytest

from moutardnv.algebra import MPoly
from moutardnv.errors import LambdaZeroError, PoleError
from moutardnv.exppoly import (WaveFn, wave_antideriv_z, wave_antideriv_zbar,
                               wave_diff_t, wave_diff_z, wave_diff_zbar,
                               wave_eval, wave_eval_naive, wave_mul_rational)

from conftest import gr, poly


def test_free_wave_derivative():
    w = WaveFn.free()
    d = wave_diff_z(w)
    # d/dz e^{lam z} = lam e^{lam z}: one slot at k = -1
    assert set(d.coeffs) == {-1}
    assert d.coeffs[-1] == MPoly.const(1)
    assert wave_diff_zbar(w).is_zero()


def test_wave_antideriv_inverts_derivative():
    z, zb = MPoly.var_z(), MPoly.var_zbar()
    w = WaveFn({0: z * z * zb, 2: z * zb * zb, -1: MPoly.const(3)})
    assert wave_diff_z(wave_antideriv_z(w)) == w
    assert wave_diff_zbar(wave_antideriv_zbar(w)) == w


def test_wave_antideriv_formula():
    # int e^{lam z} z dz = e^{lam z}(z/lam - 1/lam^2)
    z = MPoly.var_z()
    w = wave_antideriv_z(WaveFn({0: z}))
    assert w.coeffs[1] == z
    assert w.coeffs[2] == MPoly.const(-1)
    assert set(w.coeffs) == {1, 2}


def test_wave_antideriv_uniqueness_no_constant():
    # the antiderivative has no slot-content beyond what the formula produces,
    # so a pure e^{lam z} integrates to e^{lam z}/lam exactly
    w = wave_antideriv_z(WaveFn.free())
    assert set(w.coeffs) == {1}
    assert w.coeffs[1] == MPoly.const(1)


def test_time_phase_derivative():
    w = WaveFn.free(time_phase=True)
    d = wave_diff_t(w)
    assert set(d.coeffs) == {-3}
    s = wave_diff_t(WaveFn({0: MPoly.var_t()}, time_phase=False))
    assert s.coeffs[0] == MPoly.const(1)


def test_wave_arithmetic_and_scale():
    z = MPoly.var_z()
    a = WaveFn({0: z, 1: MPoly.const(2)})
    b = WaveFn({1: MPoly.const(-2), 2: z})
    s = a + b
    assert set(s.coeffs) == {0, 2}
    assert (a - a).is_zero()
    assert a.scale(gr(3)).coeffs[1] == MPoly.const(6)
    assert a.shift(2).coeffs[2] == z


def test_wave_eval_matches_naive_and_direct():
    z, zb = MPoly.var_z(), MPoly.var_zbar()
    w = WaveFn({0: MPoly.const(1), 1: z * zb, -1: zb})
    lam0, z0 = 0.7 - 0.3j, 1.2 + 0.4j
    got = wave_eval(w, z0, 0.0, lam0)
    naive = wave_eval_naive(w, z0, 0.0, lam0)
    direct = cmath.exp(lam0 * z0) * (1 + (z0 * z0.conjugate()) / lam0
                                     + lam0 * z0.conjugate())
    assert abs(got - naive) < 1e-12 * abs(got)
    assert abs(got - direct) < 1e-12 * abs(got)


def test_wave_eval_time_phase():
    w = WaveFn.free(time_phase=True)
    lam0, z0, t0 = 0.5 + 0.2j, 0.3 - 1.0j, 0.7
    got = wave_eval(w, z0, t0, lam0)
    assert abs(got - cmath.exp(lam0 * z0 + lam0 ** 3 * t0)) < 1e-12


def test_wave_eval_lambda_zero_guard():
    w = WaveFn({1: MPoly.const(1)})
    with pytest.raises(LambdaZeroError):
        wave_eval(w, 1.0, 0.0, 0.0)
    # no negative powers: lam = 0 is fine
    assert wave_eval(WaveFn({-1: MPoly.const(1)}), 1.0, 0.0, 0.0) == 0.0


def test_wave_denominator_and_pole():
    z, zb = MPoly.var_z(), MPoly.var_zbar()
    den = z * zb - MPoly.const(1)
    w = WaveFn({0: MPoly.const(1)}, den=den)
    assert abs(wave_eval(w, 2.0, 0.0, 1.0) - cmath.exp(2.0) / 3.0) < 1e-12
    with pytest.raises(PoleError):
        wave_eval(w, 1.0, 0.0, 1.0)


def test_wave_mul_rational_keeps_shared_denominator():
    from moutardnv.algebra import RationalFn
    z = MPoly.var_z()
    den = MPoly.const(1) + z * MPoly.var_zbar()
    w = wave_mul_rational(WaveFn.free(), RationalFn(z, den, normalize=False))
    assert w.den == den
    assert w.coeffs[0] == z
