import numpy as np
import pytest

from tfplunge import netpbm
from tfplunge.netpbm import NetpbmError


@pytest.mark.parametrize("binary", [True, False])
@pytest.mark.parametrize("maxval", [255, 1023])
def test_pgm_round_trip(tmp_path, rng, binary, maxval):
    gray = rng.integers(0, maxval + 1, (7, 11))
    path = tmp_path / "x.pgm"
    netpbm.write_pgm(path, gray, maxval=maxval, binary=binary)
    magic, pixels, mv = netpbm.read(path)
    assert magic == ("P5" if binary else "P2") and mv == maxval
    np.testing.assert_array_equal(pixels, gray)


def test_ppm_round_trip(tmp_path, rng):
    rgb = rng.integers(0, 256, (5, 9, 3)).astype(np.uint8)
    path = tmp_path / "x.ppm"
    netpbm.write_ppm(path, rgb)
    magic, pixels, _ = netpbm.read(path)
    assert magic == "P6"
    np.testing.assert_array_equal(pixels, rgb)


def test_ascii_ppm(tmp_path):
    path = tmp_path / "x.ppm"
    path.write_text("P3 2 1 255\n255 0 0  0 0 255\n")
    _, pixels, _ = netpbm.read(path)
    np.testing.assert_array_equal(pixels, [[[255, 0, 0], [0, 0, 255]]])


def test_packed_ascii_bits(tmp_path):
    path = tmp_path / "x.pbm"
    path.write_text("P1 4 2\n1010\n0101\n")
    _, pixels, _ = netpbm.read(path)
    np.testing.assert_array_equal(pixels, [[1, 0, 1, 0], [0, 1, 0, 1]])


def test_non_multiple_of_eight_width(tmp_path, rng):
    bits = rng.random((3, 13)) < 0.5
    path = tmp_path / "x.pbm"
    netpbm.write_pbm(path, bits)
    np.testing.assert_array_equal(netpbm.read(path)[1], bits)


@pytest.mark.parametrize(
    "content",
    [b"P7\n1 1\n", b"P1\n0 3\n", b"P1\n2 2\n0 1\n", b"P4\n16 2\n\x00", b"P2\n1 1\n10\n11\n", b"P5\nx 1\n"],
)
def test_malformed_files(tmp_path, content):
    path = tmp_path / "bad.pnm"
    path.write_bytes(content)
    with pytest.raises(NetpbmError):
        netpbm.read(path)


def test_write_ppm_shape_checked(tmp_path):
    with pytest.raises(ValueError):
        netpbm.write_ppm(tmp_path / "x.ppm", np.zeros((2, 2)))
