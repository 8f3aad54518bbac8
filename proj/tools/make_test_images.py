#!/usr/bin/env python3
"""Writes the synthetic grayscale test images used by configs/ (P5 PGM)."""
import math
import pathlib
import sys


def phantom(x, y):
    v = 0
    if (x / 0.85) ** 2 + (y / 0.95) ** 2 <= 1:
        v = 200
    if (x / 0.75) ** 2 + ((y + 0.02) / 0.85) ** 2 <= 1:
        v = 60
    if ((x - 0.25) / 0.15) ** 2 + (y / 0.35) ** 2 <= 1:
        v = 130
    if ((x + 0.25) / 0.2) ** 2 + (y / 0.3) ** 2 <= 1:
        v = 110
    if (x / 0.1) ** 2 + ((y - 0.5) / 0.1) ** 2 <= 1:
        v = 230
    return v


def blocks(x, y):
    checker = (int((x + 1) * 2) + int((y + 1) * 2)) % 2
    return 40 + 60 * checker + (100 if (y >= 0 and x < 0) else 0)


def disk(x, y):
    if (y + 0.25) ** 2 + (x - 0.25) ** 2 <= 0.19:
        return 240
    return 0.8 * (64 * (x + 1) + 32 * (y + 1))


def waves(x, y):
    return 128 + 90 * math.sin(math.pi * (y + 1)) * math.cos(math.pi * (x + 1) * 16 / 11)


def write(path, side, f):
    px = bytearray()
    for r in range(side):
        for c in range(side):
            # Pixel centers mapped to [-1, 1].
            x = (2 * c + 1) / side - 1
            y = (2 * r + 1) / side - 1
            px.append(max(0, min(255, int(round(f(x, y))))))
    path.write_bytes(b"P5\n%d %d\n255\n" % (side, side) + bytes(px))


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "configs/images")
    out.mkdir(parents=True, exist_ok=True)
    for side in (32, 128):
        for name, f in (("phantom", phantom), ("blocks", blocks), ("disk", disk), ("waves", waves)):
            write(out / f"{name}{side}.pgm", side, f)


if __name__ == "__main__":
    main()
