import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_transfer, fit_second_order
from wangnet import tcoil
from wangnet.tcoil import ASYMMETRIC, SYMMETRIC, LoadSpec

TABLE = LoadSpec.with_rp(50.0, 4e-12, 10.0, 500.0)
CLASSIC = LoadSpec(50.0, 4e-12)

loads = st.builds(
    LoadSpec,
    st.floats(10, 200),
    st.floats(0.1e-12, 10e-12),
    st.one_of(st.just(0.0), st.floats(0, 20)),
    st.one_of(st.just(0.0), st.floats(1e-4, 1e-2)),
)


def test_load_validation():
    with pytest.raises(ValueError):
        LoadSpec(0.0, 1e-12)
    with pytest.raises(ValueError):
        LoadSpec(50.0, 1e-12, -1.0)
    assert LoadSpec.with_rp(50, 1e-12, 0, math.inf).G_P == 0.0


def test_symmetric_table_inputs():
    d = tcoil.synthesize(TABLE, SYMMETRIC, angle=30).design
    assert d.R1 == pytest.approx(2.5) and d.R2 == pytest.approx(2.5)
    assert d.L1 == d.L2 == pytest.approx(50 * 50 * 4e-12 / 2)


@pytest.mark.parametrize("angle", [15, 30, 45, 60, 75])
def test_classic_coil_closed_forms(angle):
    # zero-loss symmetric coil: zeta = cos(theta), k = (4 zeta^2 - 1)/(4 zeta^2 + 1),
    # C_B = C (1 - k) / (4 (1 + k)); k here is the T-model ratio, hence the sign flip
    rep = tcoil.synthesize(CLASSIC, SYMMETRIC, angle=angle)
    z2 = math.cos(math.radians(angle)) ** 2
    k = (4 * z2 - 1) / (4 * z2 + 1)
    assert -rep.design.k == pytest.approx(k, rel=1e-12)
    assert rep.design.C_B == pytest.approx(CLASSIC.C * (1 - k) / (4 * (1 + k)), rel=1e-12)
    assert rep.pole_angle_deg == pytest.approx(angle, abs=1e-9)


def test_classic_bandwidth_values():
    bw30 = tcoil.synthesize(CLASSIC, SYMMETRIC, angle=30).bwer
    bw45 = tcoil.synthesize(CLASSIC, SYMMETRIC, angle=45).bwer
    assert bw30 == pytest.approx(2.7233, abs=1e-4)
    assert bw45 == pytest.approx(2 * math.sqrt(2), rel=1e-12)


def test_bandwidth_against_dense_search():
    rep = tcoil.synthesize(TABLE, ASYMMETRIC, angle=40, R1=2.0)
    w = np.linspace(5e9, 5e10, 2000001)  # 2.25e4 rad/s grid
    mag = np.abs(tcoil.frequency_response(rep.coeffs, rep.design.C_B, w)) * rep.coeffs.B0
    w3 = w[np.argmin(np.abs(mag - 1 / math.sqrt(2)))]
    assert rep.bw_hz * 2 * math.pi == pytest.approx(w3, rel=1e-5)


def test_asymmetric_feasibility():
    assert tcoil.r1_max(TABLE) == pytest.approx(4.4642857, rel=1e-6)
    with pytest.raises(tcoil.InfeasibleDesignError, match="R2="):
        tcoil.synthesize(TABLE, ASYMMETRIC, angle=45, R1=5.0)
    with pytest.raises(tcoil.InfeasibleDesignError):
        tcoil.synthesize(CLASSIC, ASYMMETRIC, angle=45, R1=1.0)
    heavy = LoadSpec(150.0, 1e-12, 0.0, 0.01)
    assert tcoil.r1_min(heavy) == pytest.approx(50.0)
    with pytest.raises(tcoil.InfeasibleDesignError, match="too small"):
        tcoil.design(heavy, ASYMMETRIC, 1e-13, 0.0)
    assert tcoil.design(heavy, ASYMMETRIC, 1e-13, 60.0).R2 > 0


def test_r1_at_max_gives_zero_r2():
    d = tcoil.design(TABLE, ASYMMETRIC, 1e-13, tcoil.r1_max(TABLE))
    assert d.R2 == pytest.approx(0.0, abs=1e-12)


def test_resistance_forms_agree():
    d = tcoil.design(TABLE, ASYMMETRIC, 1e-13, 2.0)
    f = tcoil.resistance_forms(TABLE, d.R1, d.R2)
    assert f["R2"] == pytest.approx(d.R2)
    assert f["R1"] == pytest.approx(d.R1)
    assert f["sum_r1"] == pytest.approx(d.R1 + d.R2) == f["sum_r2"]
    assert f["LT_r1"] == pytest.approx(d.L1 + d.L2) == f["LT_r2"]


def test_unreachable_angle():
    with pytest.raises(ValueError):
        tcoil.solve_cb_for_angle(tcoil.transfer_terms(TABLE, SYMMETRIC), 95)
    tc = tcoil.TransferCoeffs(B0=1.0, D0=1.0, D1=1.0, D2=0.1)
    with pytest.raises(tcoil.InfeasibleDesignError):
        tcoil.solve_cb_for_angle(tc, 45)


def test_smaller_cb_root_is_chosen():
    tc = tcoil.transfer_terms(TABLE, SYMMETRIC)
    cb = tcoil.solve_cb_for_angle(tc, 30)
    # the other root of the same quadratic reaches 30 degrees too
    c2 = math.cos(math.radians(30)) ** 2
    a, b, c = tc.D1 ** 2, 2 * tc.D0 * tc.D1 - 4 * c2 * tc.B0 * tc.D2, tc.D0 ** 2
    other = c / (a * cb)
    assert other > cb
    assert tcoil.pole_angle(tcoil.poles(tc, other)[0]) == pytest.approx(30, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(loads, st.floats(0.02, 2.0), st.floats(0.0, 1.0))
def test_constant_r_on_random_designs(load, cb_frac, r1_frac):
    for topo in (SYMMETRIC, ASYMMETRIC):
        r1 = 0.0
        if topo == ASYMMETRIC and load.G_P > 0:
            lo, hi = tcoil.r1_min(load), tcoil.r1_max(load)
            r1 = hi - (hi - lo) * r1_frac * 0.999
        d = tcoil.design(load, topo, cb_frac * load.C, r1)
        assert tcoil.verify_constant_r(d, load, tcoil.log_sweep()) < 1e-9


def test_perturbed_design_breaks_constant_r():
    d = tcoil.synthesize(TABLE, SYMMETRIC, angle=30).design
    bad = tcoil._finish(d.topology, d.R1, d.R2, d.G_B, d.L1 * 1.01, d.L2, d.L3, d.C_B)
    assert tcoil.verify_constant_r(bad, TABLE, tcoil.log_sweep()) > 1e-4


@pytest.mark.parametrize("topo, r1", [(SYMMETRIC, 0.0), (ASYMMETRIC, 2.0), (ASYMMETRIC, 0.3)])
def test_transfer_function_matches_circuit(topo, r1):
    rep = tcoil.synthesize(TABLE, topo, angle=45, R1=r1)
    net, roles = tcoil.tcoil_network(rep.design, TABLE)
    s = 1j * np.logspace(8, 11, 20)
    h = np.array([dense_transfer(net, roles["load"], x) for x in s])
    expect = tcoil.frequency_response(rep.coeffs, rep.design.C_B, s.imag)
    np.testing.assert_allclose(h, expect, rtol=1e-9)
    coeffs, misfit = fit_second_order(s, h)
    assert misfit < 1e-9
    np.testing.assert_allclose(coeffs, rep.coeffs.denominator(rep.design.C_B), rtol=1e-6)


def test_mechanical_and_symmetric_transfer_terms_agree():
    d = tcoil.design(TABLE, SYMMETRIC, 1e-12)
    mech = tcoil.asym_transfer_terms(TABLE, d)
    closed = tcoil.sym_transfer_terms(TABLE)
    for f in ("B0", "D0", "D1", "D2"):
        assert getattr(mech, f) == pytest.approx(getattr(closed, f), rel=1e-12)


@pytest.mark.parametrize("r1", [0.0, 1.0, 2.0, 4.0])
def test_asymmetric_constant_term_closed_form(r1):
    R, RS, GP = TABLE.R, TABLE.R_S, TABLE.G_P
    d = tcoil.design(TABLE, ASYMMETRIC, 1e-12, r1)
    tc = tcoil.asym_transfer_terms(TABLE, d)
    expect = 1 + RS * GP + d.R1 * (1 + (R + RS + d.R2) * GP) / (R + d.R2)
    assert tc.B0 == pytest.approx(expect, rel=1e-12)
    LT = d.L1 + d.L2
    D0 = (TABLE.C * (d.L1 * (d.R2 + R) + d.R1 * d.L2) - d.L1 * d.L2 * GP) / LT + TABLE.C * RS
    assert tc.D0 == pytest.approx(D0, rel=1e-12)


def test_root_locus_circle():
    for topo, r1 in ((SYMMETRIC, 0.0), (ASYMMETRIC, 2.0)):
        tc = tcoil.transfer_terms(TABLE, topo, r1)
        c, r = tcoil.root_locus(tc)
        for cb in np.linspace(0.2, 3, 15) * 1e-12:
            p1, p2 = tcoil.poles(tc, cb)
            if p1.imag:
                assert abs(p1 - c) == pytest.approx(r, rel=1e-9)


def test_expansion_identities_and_designs():
    for topo, r1 in ((SYMMETRIC, 0.0), (ASYMMETRIC, 2.0)):
        d = tcoil.synthesize(TABLE, topo, angle=30, R1=r1).design
        assert tcoil.verify_expansion_identity(topo, TABLE, d, trials=20) < 1e-9
        assert tcoil.coefficient_residual(d, TABLE) < 1e-12


def test_expansion_sign_sensitivity():
    # flipping the three sign-sensitive terms of the asymmetric expansion breaks the identity
    rng = np.random.default_rng(1)
    el = tcoil._random_elements(ASYMMETRIC, rng, TABLE)
    s = 2j / TABLE.tau
    good = tcoil.expansion_mismatch(ASYMMETRIC, s, el, TABLE)
    orig = tcoil.asym_expansion_terms

    def flipped(L1, L2, L3, R1, R2, C_B, R, R_S, C, G_P):
        t = orig(L1, L2, L3, R1, R2, C_B, R, R_S, C, G_P)
        t[1][8] = -t[1][8]
        t[2][3] = -t[2][3]
        t[2][4] = -t[2][4]
        return t

    try:
        tcoil.asym_expansion_terms = flipped
        bad = tcoil.expansion_mismatch(ASYMMETRIC, s, el, TABLE)
    finally:
        tcoil.asym_expansion_terms = orig
    assert good < 1e-12 and bad > 1e-3


def test_inductor_forms_and_quadratic():
    for r1 in (0.0, 1.0, 3.0, tcoil.r1_max(TABLE)):
        d = tcoil.design(TABLE, ASYMMETRIC, 1e-12, r1)
        assert tcoil.b3_residual(d, TABLE) < 1e-12
        assert tcoil.inductor_form_mismatch(d, TABLE) < 1e-12


def test_coupled_round_trip():
    La, Lb, M, k = tcoil.to_coupled(3e-9, 2e-9, -0.5e-9)
    assert tcoil.from_coupled(La, Lb, M) == pytest.approx((3e-9, 2e-9, -0.5e-9))
    assert k == pytest.approx(-0.5e-9 / math.sqrt(2.5e-9 * 1.5e-9))
    with pytest.raises(tcoil.UnrealizableError):
        tcoil.to_coupled(1e-9, 1e-9, -2e-9)


def test_thevenin_balanced_bridge():
    a, b, e = 2 + 1j, 3 - 2j, 50
    v, z = tcoil.thevenin(a, b, e)
    assert v == 1.0
    assert z == pytest.approx((b + e) * a / (a + b))


def test_report_round_trip():
    rep = tcoil.synthesize(TABLE, ASYMMETRIC, angle=45, R1=2.0)
    d, load = tcoil.report_from_dict(rep.to_dict())
    assert d == rep.design and load == TABLE
    with pytest.raises(ValueError):
        tcoil.report_from_dict({"topology": "sym"})


def test_zero_resistances_shorted_in_network():
    d = tcoil.synthesize(CLASSIC, SYMMETRIC, angle=45).design
    net, roles = tcoil.tcoil_network(d, CLASSIC)
    ids = {e.id for e in net.edges}
    assert not ids & {"R1", "R2", "RS", "RB", "RP"}
    assert roles["load"] != roles["gnd"]
