import numpy as np
import pytest

from toposmooth import (
    ADJ_48,
    ADJ_84,
    SmoothingConfig,
    background_component_count,
    component_count,
    hasf,
    homotopic_cutting,
    homotopic_filling,
    smooth,
)

from conftest import noisy_disc, random_image
from oracles import perimeter4


def topology_preserved(before, after, adj):
    return (component_count(before, adj.fg) == component_count(after, adj.fg)
            and background_component_count(before, adj.bg) == background_component_count(after, adj.bg))


def square_with_corner_spur():
    img = np.zeros((15, 15), np.uint8)
    img[3:12, 3:12] = 1
    img[2, 2] = 1
    return img


def annulus_with_corner_notch():
    img = np.zeros((17, 17), np.uint8)
    img[3:14, 3:14] = 1
    img[6:11, 6:11] = 0
    img[5, 5] = 0
    return img


class TestHomotopicCutting:
    def test_radius_zero_is_identity(self, rng):
        img = random_image(rng, 12, 12, 0.5)
        out = homotopic_cutting(img, np.zeros_like(img), 0)
        assert np.array_equal(out, img)

    def test_full_constraint_is_identity(self, rng):
        img = random_image(rng, 12, 12, 0.5)
        assert np.array_equal(homotopic_cutting(img, img, 3), img)

    def test_rejects_constraint_outside_object(self):
        img = np.zeros((5, 5), np.uint8)
        keep = np.zeros_like(img)
        keep[2, 2] = 1
        with pytest.raises(ValueError):
            homotopic_cutting(img, keep, 1)

    def test_corner_spur_removed(self):
        img = square_with_corner_spur()
        out = homotopic_cutting(img, np.zeros_like(img), 2)
        assert out[2, 2] == 0
        assert np.all(out <= img)
        assert topology_preserved(img, out, ADJ_84)

    def test_axial_tip_is_kept(self):
        # a 1-pixel bump centered on an edge coincides with the extreme point
        # of a disc lying inside the object, so pruning must not take it
        img = np.zeros((15, 15), np.uint8)
        img[3:12, 3:12] = 1
        img[7, 12] = 1
        out = homotopic_cutting(img, np.zeros_like(img), 2)
        assert out[7, 12] == 1
        assert np.all(out <= img)
        assert topology_preserved(img, out, ADJ_84)

    def test_sandwich_random(self, rng):
        for _ in range(10):
            img = random_image(rng, 20, 20, 0.6)
            keep = (img & random_image(rng, 20, 20, 0.15)).astype(np.uint8)
            r = int(rng.integers(0, 4))
            out = homotopic_cutting(img, keep, r)
            assert np.all(out >= keep)
            assert np.all(out <= img)
            assert topology_preserved(img, out, ADJ_84)


class TestHomotopicFilling:
    def test_radius_zero_is_identity(self, rng):
        img = random_image(rng, 12, 12, 0.5)
        out = homotopic_filling(img, np.zeros_like(img), 0)
        assert np.array_equal(out, img)

    def test_rejects_overlap_with_object(self):
        img = np.ones((4, 4), np.uint8)
        avoid = np.zeros_like(img)
        avoid[1, 1] = 1
        with pytest.raises(ValueError):
            homotopic_filling(img, avoid, 1)

    def test_corner_notch_filled(self):
        # under (4,8) the background is 8-connected, so the diagonal notch
        # in the inner boundary is attached to the hole and gets filled
        img = annulus_with_corner_notch()
        out = homotopic_filling(img, np.zeros_like(img), 2, adj=ADJ_48)
        assert out[5, 5] == 1
        assert np.all(out >= img)
        assert topology_preserved(img, out, ADJ_48)

    def test_corner_notch_pinned_under_84(self):
        # under (8,4) the same notch is its own 4-connected background
        # component; filling it would change topology, so it must survive
        img = annulus_with_corner_notch()
        out = homotopic_filling(img, np.zeros_like(img), 2, adj=ADJ_84)
        assert out[5, 5] == 0
        assert topology_preserved(img, out, ADJ_84)

    def test_sandwich_random(self, rng):
        for _ in range(10):
            img = random_image(rng, 20, 20, 0.4)
            avoid = ((random_image(rng, 20, 20, 0.15) == 1) & (img == 0)).astype(np.uint8)
            r = int(rng.integers(0, 4))
            out = homotopic_filling(img, avoid, r)
            assert np.all(out >= img)
            assert np.all(out & avoid == 0)
            assert topology_preserved(img, out, ADJ_84)

    @pytest.mark.parametrize("adj", [ADJ_84, ADJ_48])
    def test_complement_duality(self, rng, adj):
        # filling is cutting of the complement under the dual adjacency once
        # the complement is embedded with padding wide enough that window
        # effects cannot reach back in
        h, w = 18, 16
        pad = int(np.ceil(np.sqrt(h * h + w * w))) + 1
        for _ in range(4):
            img = np.zeros((h, w), np.uint8)
            img[4:14, 4:12] = random_image(rng, 10, 8, 0.5)
            avoid = ((random_image(rng, h, w, 0.05) == 1) & (img == 0)).astype(np.uint8)
            r = int(rng.integers(1, 4))
            filled = homotopic_filling(img, avoid, r, adj=adj)
            comp = np.ones((h + 2 * pad, w + 2 * pad), np.uint8)
            comp[pad:-pad, pad:-pad] = 1 - img
            keep = np.ones((h + 2 * pad, w + 2 * pad), np.uint8)
            keep[pad:-pad, pad:-pad] = avoid
            cut = homotopic_cutting(comp, keep, r, adj=adj.dual())
            assert np.array_equal(filled, (1 - cut)[pad:-pad, pad:-pad])


class TestHasf:
    def test_order_zero_is_identity(self, rng):
        img = random_image(rng, 10, 10, 0.5)
        assert np.array_equal(hasf(img, SmoothingConfig(r_max=0)), img)

    @pytest.mark.parametrize("adj", [ADJ_84, ADJ_48])
    def test_topology_preserved(self, rng, adj):
        for _ in range(6):
            img = random_image(rng, 32, 32, rng.uniform(0.2, 0.8))
            out = hasf(img, SmoothingConfig(r_max=3, adj=adj))
            assert topology_preserved(img, out, adj)

    def test_constraints_respected(self, rng):
        img = random_image(rng, 24, 24, 0.5)
        keep = (img & random_image(rng, 24, 24, 0.1)).astype(np.uint8)
        avoid = ((random_image(rng, 24, 24, 0.1) == 1) & (img == 0)).astype(np.uint8)
        out = hasf(img, SmoothingConfig(r_max=3, keep=keep, avoid=avoid))
        assert np.all(out >= keep)
        assert np.all(out & avoid == 0)
        assert topology_preserved(img, out, ADJ_84)

    def test_rejects_overlapping_constraints(self):
        img = np.zeros((6, 6), np.uint8)
        img[2, 2] = 1
        keep = np.zeros_like(img)
        keep[2, 2] = 1
        avoid = keep.copy()
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=1, keep=keep, avoid=avoid))

    def test_rejects_bad_constraints(self, rng):
        img = random_image(rng, 6, 6, 0.5)
        img[0, 0] = 0
        keep = np.zeros_like(img)
        keep[0, 0] = 1
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=1, keep=keep))
        img[1, 1] = 1
        avoid = np.zeros_like(img)
        avoid[1, 1] = 1
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=1, avoid=avoid))

    def test_rejects_bad_config(self, rng):
        img = random_image(rng, 6, 6, 0.5)
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=-1))
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=1, workers=0))
        with pytest.raises(ValueError):
            hasf(img, SmoothingConfig(r_max=1, scheduler="fair"))

    def test_smoothing_reduces_boundary_length(self, rng):
        img = noisy_disc(48, 48, 16, rng, flip=0.04)
        out = smooth(img, 3)
        assert perimeter4(out) <= perimeter4(img)
        assert topology_preserved(img, out, ADJ_84)

    def test_large_noisy_image_topology(self, rng):
        img = noisy_disc(512, 512, 180, rng, flip=0.02)
        out = smooth(img, 5)
        assert topology_preserved(img, out, ADJ_84)


class TestSmooth:
    def test_order_zero_is_identity(self, rng):
        img = random_image(rng, 8, 8, 0.5)
        assert np.array_equal(smooth(img, 0), img)

    def test_worker_and_scheduler_invariance(self, rng):
        img = random_image(rng, 40, 40, 0.5)
        base = smooth(img, 2, workers=1)
        for workers in (2, 4):
            for scheduler in ("nps", "strided"):
                assert np.array_equal(smooth(img, 2, workers=workers, scheduler=scheduler), base)

    def test_concurrent_invocations_on_distinct_images(self, rng):
        # pipelines sharing the pooled workers must not interfere
        import threading

        images = [random_image(rng, 48, 48, 0.5) for _ in range(4)]
        expected = [smooth(img, 2, workers=2) for img in images]
        results = [None] * 4

        def work(i):
            results[i] = smooth(images[i], 2, workers=2)

        threads = [threading.Thread(target=work, args=(i,)) for i in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for got, want in zip(results, expected):
            assert np.array_equal(got, want)
