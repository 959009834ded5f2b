import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyball import _kernels as K
from polyball.exact import Params
from polyball.norms import knorm

BACKENDS = K.available_backends()
needs_numba = pytest.mark.skipif("numba" not in BACKENDS, reason="numba not importable")


@given(st.integers(min_value=0, max_value=2**63), st.integers(min_value=0, max_value=10**6))
def test_numpy_stream_matches_reference(seed, start):
    u = K.uniforms(seed, start, 4, backend="numpy")
    ref = [(K.splitmix64_reference(seed, start + i) >> 11) * 2.0**-53 for i in range(4)]
    assert u.tolist() == ref


@needs_numba
def test_backends_draw_identical_streams():
    assert np.array_equal(K.uniforms(123, 77, 10**5, "numba"), K.uniforms(123, 77, 10**5, "numpy"))


def test_uniforms_lie_in_unit_interval():
    u = K.uniforms(9, 0, 10**5)
    assert u.min() >= 0 and u.max() < 1 and abs(u.mean() - 0.5) < 0.01


@pytest.mark.parametrize("backend", BACKENDS)
def test_knorm_rows_match_exact_norm(backend):
    x = K.uniforms(3, 0, 600).reshape(100, 6) * 4 - 2
    got = K.knorm_rows(x, 2.5, backend=backend)
    ref = [float(knorm(list(row), Params(6, "5/2"))) for row in x]
    assert np.allclose(got, ref, rtol=0, atol=1e-12)


@needs_numba
@pytest.mark.parametrize("kind", [K.CUBE, K.RHO, K.RHO_STAR])
def test_backends_count_identical_hits(kind):
    a = np.zeros(4)
    counts = {b: K.count_hits(kind, 2.5, a, 0.0, 4, 1.0, 300_000, 11, backend=b) for b in BACKENDS}
    assert len(set(counts.values())) == 1


@needs_numba
def test_backends_agree_on_halfspace_body():
    a = np.array([1.0, -2.0, 3.0])
    counts = {b: K.count_hits(K.HALFSPACE_UNIT_CUBE, 1.0, a, 0.5, 3, 0.5, 200_000, 4, backend=b)
              for b in BACKENDS}
    assert len(set(counts.values())) == 1


def test_cube_hits_everything():
    assert K.count_hits(K.CUBE, 1.0, np.zeros(3), 0.0, 3, 1.0, 50_000, 0) == 50_000


def test_unknown_backend_rejected(monkeypatch):
    monkeypatch.setenv("POLYBALL_BACKEND", "fortran")
    with pytest.raises(ValueError):
        K._requested_backend()
    with pytest.raises(ValueError):
        K.uniforms(0, 0, 3, backend="fortran")
