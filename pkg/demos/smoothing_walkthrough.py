"""Smoothing a noisy shape while its topology stays put.

Builds a disc with a hole and salt-and-pepper boundary noise, smooths it
at increasing filter orders, and prints the component counts at each step
to show they never move. Writes before/after PBMs next to this script.
"""

import pathlib

import numpy as np

from toposmooth import (
    background_component_count,
    component_count,
    smooth,
    write_pbm,
)

HERE = pathlib.Path(__file__).parent


def ascii_preview(img, step=4):
    rows = []
    for r in range(0, img.shape[0], step):
        rows.append("".join("#" if img[r, c] else "." for c in range(0, img.shape[1], step)))
    return "\n".join(rows)


def make_noisy_shape(rng):
    h = w = 128
    yy = np.arange(h)[:, None] - h // 2
    xx = np.arange(w)[None, :] - w // 2
    disc = (yy * yy + xx * xx <= 45 * 45).astype(np.uint8)
    hole = (yy * yy + xx * xx <= 14 * 14).astype(np.uint8)
    shape = (disc & (1 - hole)).astype(np.uint8)
    noise = (rng.random((h, w)) < 0.04).astype(np.uint8)
    return (shape ^ noise).astype(np.uint8)


def main():
    rng = np.random.default_rng(7)
    img = make_noisy_shape(rng)
    write_pbm(img, HERE / "walkthrough_input.pbm")

    print("input image:")
    print(ascii_preview(img))
    print(f"object components: {component_count(img, 8)}, "
          f"background components: {background_component_count(img, 4)}")

    for r_max in (1, 3, 5):
        out = smooth(img, r_max)
        print(f"\nafter smoothing with r_max={r_max}:")
        print(ascii_preview(out))
        print(f"object components: {component_count(out, 8)}, "
              f"background components: {background_component_count(out, 4)}")
        write_pbm(out, HERE / f"walkthrough_rmax{r_max}.pbm")

    print("\nEvery isolated speck and hole survives by design; only the")
    print("boundaries get rounder. Raise r_max for stronger smoothing.")


if __name__ == "__main__":
    main()
