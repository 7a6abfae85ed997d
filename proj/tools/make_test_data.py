#!/usr/bin/env python3
"""Regenerate the natural test hosts and the 32x32 logo watermark under tests/data.

Hosts come from scikit-image's bundled sample images (public domain / CC0),
converted to 8-bit grayscale PGM. The watermark is two lines of text drawn
with Pillow's built-in bitmap font and written as a P4 bitmap.
"""
import pathlib

import numpy as np
import skimage.color
import skimage.data
from PIL import Image, ImageDraw, ImageFont

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"
HOSTS = ["camera", "astronaut", "moon", "grass", "gravel", "brick"]


def gray(name):
    img = getattr(skimage.data, name)()
    if img.ndim == 3:
        img = (skimage.color.rgb2gray(img[..., :3]) * 255.0).round().astype(np.uint8)
    return img


def write_pgm(path, img):
    h, w = img.shape
    path.write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.astype(np.uint8).tobytes())


def write_pbm(path, bits):
    h, w = bits.shape
    packed = np.packbits(bits.astype(np.uint8), axis=1)
    path.write_bytes(b"P4\n%d %d\n" % (w, h) + packed.tobytes())


def logo():
    canvas = Image.new("1", (32, 32), 0)
    draw = ImageDraw.Draw(canvas)
    font = ImageFont.load_default()
    draw.text((4, 3), "DWT", fill=1, font=font)
    draw.text((1, 17), "MARK", fill=1, font=font)
    return np.array(canvas, dtype=np.uint8)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in HOSTS:
        img = gray(name)
        assert img.shape == (512, 512), name
        write_pgm(OUT / f"{name}.pgm", img)
    write_pbm(OUT / "logo32.pbm", logo())


if __name__ == "__main__":
    main()
