import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_image(rng, h, w, density):
    return (rng.random((h, w)) < density).astype(np.uint8)


def noisy_disc(h, w, radius, rng, flip=0.03):
    """Disc with salt-and-pepper boundary noise, the canonical smoothing input."""
    yy = np.arange(h)[:, None] - h // 2
    xx = np.arange(w)[None, :] - w // 2
    disc = (yy * yy + xx * xx <= radius * radius).astype(np.uint8)
    noise = rng.random((h, w)) < flip
    return (disc ^ noise.astype(np.uint8)).astype(np.uint8)


def jagged_disc(h, w, radius, amplitudes=((9, 12.0, 0.0), (23, 7.0, 1.2), (41, 4.0, 0.3))):
    """Single blob whose boundary is roughened by angular harmonics: the
    representative benchmark input for a boundary-smoothing filter."""
    yy = np.arange(h)[:, None] - h // 2
    xx = np.arange(w)[None, :] - w // 2
    theta = np.arctan2(yy, xx)
    rr = np.full((h, w), float(radius))
    for freq, amp, phase in amplitudes:
        rr += amp * np.sin(freq * theta + phase)
    return ((yy * yy + xx * xx) <= rr * rr).astype(np.uint8)
