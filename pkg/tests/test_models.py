import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourvertex.errors import ParseError, ShapeMismatch
from fourvertex.models import (
    ADOPTED_CONVENTION,
    FourVertexParams,
    SixVertexParams,
    XXXParams,
    l4v,
    l4v_local,
    l6v_local,
    load_config,
    local_to_numpy,
    lxxx_local,
    params_from_config,
    phi_map,
    projector,
    r6v,
    r6v_trig,
    r_xxx,
    spin_matrices,
    vertex_weight_table,
)
from fourvertex.operator_core import LocalOperator, Scalar, sigma_minus, sigma_plus

spins = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])


def embed_pair(R, p, q):
    """8x8 action of a 4x4 R on tensor slots p, q of three qubits, built entry by entry."""
    out = np.zeros((8, 8), dtype=complex)
    R4 = R.reshape(2, 2, 2, 2)
    spect = [k for k in range(3) if k not in (p, q)][0]
    for i_out in range(8):
        o = [(i_out >> 2) & 1, (i_out >> 1) & 1, i_out & 1]
        for i_in in range(8):
            n = [(i_in >> 2) & 1, (i_in >> 1) & 1, i_in & 1]
            if o[spect] == n[spect]:
                out[i_out, i_in] = R4[o[p], o[q], n[p], n[q]]
    return out


def ybe_index_oracle(R_of, lam, mu):
    """Yang-Baxter residual with embeddings independent of the library's kron code."""
    R12 = embed_pair(R_of(lam - mu), 0, 1)
    R13 = embed_pair(R_of(lam), 0, 2)
    R23 = embed_pair(R_of(mu), 1, 2)
    return np.linalg.norm(R12 @ R13 @ R23 - R23 @ R13 @ R12)


def test_l4v_entries():
    u = Scalar(3)
    (a, b), (c, d) = l4v_local(u)
    e = projector(ADOPTED_CONVENTION)
    assert a == e.scale(-u)
    assert b == sigma_minus()
    assert c == sigma_plus()
    assert d == e.scale(Scalar(Fraction(1, 3)))
    assert projector("C1") == sigma_plus() @ sigma_minus()
    assert projector("C2") == sigma_minus() @ sigma_plus()


def test_l4v_symbolic_matches_operator():
    from fourvertex.symbolic_words import evaluate

    p = FourVertexParams(u=Fraction(5, 2))
    sym = l4v(1, p, 3, "symbolic")
    op = l4v(1, p, 3, "operator")
    for k in range(2):
        for j in range(2):
            assert evaluate(sym.entries[k][j], {"u": p.u}) == op.entries[k][j]


def test_params_validation():
    with pytest.raises(ValueError):
        FourVertexParams(u=0)
    with pytest.raises(ValueError):
        FourVertexParams(convention="C3")
    with pytest.raises(ValueError):
        XXXParams(spin=Fraction(1, 3))
    with pytest.raises(ShapeMismatch):
        l4v(3, None, 3)
    assert XXXParams(spin=1).local_dim == 3


@given(spins)
def test_spin_algebra(s):
    for norm in ("hermitian", "rational"):
        s3, sp, sm = (m.to_numpy(exact=False) for m in spin_matrices(s, norm))
        d = s3.shape[0]
        assert np.allclose(s3 @ sp - sp @ s3, sp)
        assert np.allclose(s3 @ sm - sm @ s3, -sm)
        assert np.allclose(sp @ sm - sm @ sp, 2 * s3)
        cas = s3 @ s3 + 0.5 * (sp @ sm + sm @ sp)
        assert np.allclose(cas, float(s * (s + 1)) * np.eye(d))


def test_rational_spin_exact():
    s3, sp, sm = spin_matrices(Fraction(3, 2), "rational")
    assert sp.mode == "exact" and sm.mode == "exact"


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0.1, 1))
def test_trig_r_solves_ybe(lam, mu, eta):
    res = ybe_index_oracle(lambda x: r6v_trig(x, eta, 1), lam, mu)
    assert res <= 1e-12


def test_r_matrix_fields():
    R = r6v(a=2, b=3, c=5, H=0.1, V=0.2)
    assert R[0, 0] == pytest.approx(2 * np.exp(0.3))
    assert R[1, 2] == 5 and R[2, 1] == 5
    assert R[3, 3] == pytest.approx(2 * np.exp(-0.3))


def test_l6v_weights():
    x, eta = 0.3 + 0.1j, 0.4
    (d1, m), (p, d2) = local_to_numpy(l6v_local(x, eta))
    assert d1[1, 1] == pytest.approx(cmath.sin(x + eta))
    assert d1[0, 0] == pytest.approx(cmath.sin(x - eta))
    assert m[0, 1] == pytest.approx(cmath.sin(2 * eta))
    assert d2[1, 1] == pytest.approx(cmath.sin(x - eta))


def test_xxx_rll_sign():
    from fourvertex.monodromy import rll_residual

    lam, mu = 0.3 + 0.2j, -0.5 + 0.1j
    La, Lb = lxxx_local(lam, Fraction(1, 2)), lxxx_local(mu, Fraction(1, 2))
    assert rll_residual(r_xxx(lam - mu), La, Lb) <= 1e-12
    wrong = (lam - mu) * np.eye(4) - 1j * np.eye(4)[[0, 2, 1, 3]]
    assert rll_residual(wrong, La, Lb) > 1e-3


def test_phi_map_images():
    p = XXXParams(lam=Fraction(1, 2), spin=1)
    a = phi_map("A4V", p)
    s3, sp, sm = spin_matrices(1)
    assert a.terms  # lam + i S3 is not zero
    b = phi_map("B4V", p, site=1, N=2)
    assert b.chain_len == 2
    with pytest.raises(ValueError):
        phi_map("E4V", p)


def test_vertex_weight_table():
    assert vertex_weight_table(FourVertexParams(a=2, c=3)) == {1: 2, 2: 2, 3: 0, 4: 0, 5: 3, 6: 3}
    assert vertex_weight_table(SixVertexParams(a=1, b=2, c=3), "6v")[3] == 2


def test_load_config(tmp_path):
    f = tmp_path / "c.yaml"
    f.write_text("model: 4v\nu: 0.5\nconvention: C2\n")
    cfg = load_config(f)
    assert cfg["u"] == Fraction(1, 2)
    p = params_from_config(cfg)
    assert p.u == Scalar(Fraction(1, 2)) and p.convention == "C2"
    bad = tmp_path / "bad.yaml"
    bad.write_text("nonsense: 1\n")
    with pytest.raises(ParseError):
        load_config(bad)
    nested = tmp_path / "n.yaml"
    nested.write_text("u: {a: 1}\n")
    with pytest.raises(ParseError):
        load_config(nested)
