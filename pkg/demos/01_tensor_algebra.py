"""Tour of the order-3 tensor primitives.

Shows the modal product against its summation definition, the unfolding
layout, and why mode products along distinct modes commute.
"""

import numpy as np

from esn_tucker import tensor_ops as tops


def main():
    rng = np.random.default_rng(0)
    t = rng.normal(size=(3, 4, 2))

    print("tensor shape:", t.shape)

    # mode-1 unfolding is the frontal slices laid side by side
    u1 = tops.unfold(t, 1)
    print("mode-1 unfolding shape:", u1.shape)
    print("matches [slice_1 | slice_2]:",
          np.array_equal(u1, np.hstack([t[:, :, 0], t[:, :, 1]])))

    # fold inverts unfold for every mode
    for mode in (1, 2, 3):
        back = tops.fold(tops.unfold(t, mode), mode, t.shape)
        print(f"fold(unfold(t, {mode})) == t:", np.array_equal(back, t))

    # contracting mode 1 with a row of ones sums over that mode
    ones = np.ones((1, 3))
    summed = tops.mode_product(t, ones, 1)
    print("\nmode-1 contraction with ones equals the mode-1 sum:",
          np.allclose(summed[0], t.sum(axis=0)))

    # products along distinct modes commute
    b = rng.normal(size=(2, 3))
    c = rng.normal(size=(5, 4))
    ab = tops.mode_product(tops.mode_product(t, b, 1), c, 2)
    ba = tops.mode_product(tops.mode_product(t, c, 2), b, 1)
    print("mode-1 then mode-2 == mode-2 then mode-1:",
          np.allclose(ab, ba))

    # the Frobenius norm is the square root of the self inner product
    print("\n||t||_F:", f"{tops.fro_norm(t):.6f}")
    print("sqrt(<t, t>):", f"{np.sqrt(tops.inner(t, t)):.6f}")


if __name__ == "__main__":
    main()
