import subprocess
import sys

import numpy as np
import pytest

from tfplunge import _fallback, kernels

compiled = pytest.importorskip("tfplunge._kernels", reason="compiled extension not built")


@pytest.mark.parametrize("a,M", [(2, 8), (4, 16), (10, 100)])
def test_backends_agree(a, M, rng):
    L = a * M
    h = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    s = (rng.random((M, L // a)) < 0.3).astype(float)
    s[:, 0] = 0  # exercise the all-zero column shortcut
    kern = np.ascontiguousarray((M * np.fft.ifft(s, axis=0)).T)
    ref = _fallback.assemble_multiplier(h, kern, a)
    fast = compiled.assemble_multiplier(h, kern, a)
    np.testing.assert_allclose(fast, ref, atol=1e-12)
    np.testing.assert_array_equal(fast, fast.conj().T)


def test_default_backend_is_compiled():
    assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    code = "from tfplunge import kernels; print(kernels.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], env={"TFPLUNGE_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
