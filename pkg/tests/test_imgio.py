"""I/O tests: PNM parsing, PNG decoding, and dump writers."""

import numpy as np
import pytest
from PIL import Image

from sigwin import FormatError
from sigwin.imgio import (
    binary_to_gray,
    read_image,
    read_pgm,
    write_pbm,
    write_pgm,
    write_png,
)


def checker(h, w):
    y, x = np.indices((h, w))
    return (((y + x) % 2) * 255).astype(np.uint8)


class TestPGM:
    def test_p5_round_trip(self, tmp_path):
        img = checker(7, 11)
        path = tmp_path / "img.pgm"
        write_pgm(img, path)
        back = read_image(path)
        assert back.dtype == np.uint8
        np.testing.assert_array_equal(back, img)

    def test_p5_parse_inline(self):
        data = b"P5\n3 2\n255\n" + bytes(range(6))
        img = read_pgm(data)
        assert img.shape == (2, 3)
        np.testing.assert_array_equal(img.ravel(), np.arange(6, dtype=np.uint8))

    def test_header_comments_and_whitespace(self):
        data = b"P5 # magic\n# a comment line\n  3\t2 # dims\n255\n" + bytes(6)
        img = read_pgm(data)
        assert img.shape == (2, 3)

    def test_maxval_over_255_rejected(self):
        data = b"P5\n2 2\n65535\n" + bytes(8)
        with pytest.raises(FormatError):
            read_pgm(data)

    def test_maxval_zero_rejected(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5\n2 2\n0\n" + bytes(4))

    def test_truncated_raster_rejected(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5\n4 4\n255\n" + bytes(7))

    def test_non_numeric_header_rejected(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5\nabc 2\n255\n" + bytes(4))

    def test_unknown_magic_rejected(self):
        with pytest.raises(FormatError):
            read_pgm(b"P6\n1 1\n255\n\x00\x00\x00")

    def test_result_is_writable_copy(self):
        data = b"P5\n2 1\n255\n\x00\xff"
        img = read_pgm(data)
        img[0, 0] = 7  # must not raise: decoded array owns its memory
        assert img[0, 0] == 7


class TestPBM:
    def test_p4_round_trip(self, tmp_path):
        bits = np.zeros((5, 9), dtype=bool)
        bits[2, 1:8] = True
        bits[0, 0] = True
        path = tmp_path / "bits.pbm"
        write_pbm(bits, path)
        back = read_image(path)
        # PBM 1 bits are ink; the reader renders ink as gray 0
        np.testing.assert_array_equal(back == 0, bits)
        assert set(np.unique(back)) <= {0, 255}

    def test_p4_row_padding(self, tmp_path):
        # width not a multiple of 8 exercises per-row bit padding
        bits = np.ones((3, 13), dtype=bool)
        path = tmp_path / "wide.pbm"
        write_pbm(bits, path)
        back = read_image(path)
        assert back.shape == (3, 13)
        assert (back == 0).all()

    def test_p4_truncated_rejected(self):
        with pytest.raises(FormatError):
            read_pgm(b"P4\n16 4\n" + bytes(3))


class TestPNG:
    def test_gray_round_trip(self, tmp_path):
        img = checker(12, 8)
        path = tmp_path / "img.png"
        write_png(img, path)
        back = read_image(path)
        np.testing.assert_array_equal(back, img)

    def test_rgb_converted_to_gray(self, tmp_path):
        rgb = np.zeros((4, 4, 3), dtype=np.uint8)
        rgb[..., 0] = 255  # pure red
        path = tmp_path / "rgb.png"
        Image.fromarray(rgb, mode="RGB").save(path)
        back = read_image(path)
        assert back.shape == (4, 4)
        assert back.dtype == np.uint8
        # ITU-R 601 luma of pure red is 76
        assert (back == 76).all()

    def test_16bit_png_rejected(self, tmp_path):
        img = Image.new("I;16", (4, 4))
        path = tmp_path / "deep.png"
        img.save(path)
        with pytest.raises(FormatError):
            read_image(path)

    def test_garbage_file_rejected(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\nnot really a png")
        with pytest.raises(FormatError):
            read_image(path)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            read_image(tmp_path / "nope.png")


class TestBinaryToGray:
    def test_default_palette(self):
        bits = np.array([[True, False]])
        gray = binary_to_gray(bits)
        np.testing.assert_array_equal(gray, [[0, 255]])
        assert gray.dtype == np.uint8

    def test_custom_levels(self):
        bits = np.array([[True, False]])
        np.testing.assert_array_equal(binary_to_gray(bits, ink=30, paper=200), [[30, 200]])
