"""Driving a fixed random reservoir with a switching signal.

Generates one sine/square pattern, runs it through an echo state
network and prints a coarse picture of how the states separate the two
segment types.
"""

import numpy as np

from esn_tucker import data, esn


def main():
    ds = data.gen_sine_square(num_patterns=1, segments_per_pattern=6,
                              segment_len=100, seed=3)
    sample = ds.samples[0]
    print("signal shape:", sample.values.shape)
    print("segment labels:",
          sample.pointwise_labels[::100], "(1 = sine, 2 = square)")

    reservoir = esn.make_reservoir(n_nodes=20, n_inputs=1, alpha=0.5,
                                   seed=7)
    rho = np.max(np.abs(np.linalg.eigvals(reservoir.w_res)))
    print(f"\nreservoir: N={reservoir.n_nodes}, "
          f"{np.count_nonzero(reservoir.w_res)} recurrent weights, "
          f"spectral radius {rho:.4f}")

    states = esn.run(reservoir, sample.values)
    print("state matrix shape:", states.shape)

    # states are bounded by the tanh nonlinearity ...
    print("state range: [%.3f, %.3f]" % (states.min(), states.max()))

    # ... and their per-segment statistics differ by segment type
    print("\nper-segment mean absolute state:")
    for i in range(6):
        seg = states[:, i * 100:(i + 1) * 100]
        kind = "sine  " if sample.pointwise_labels[i * 100] == 1 else "square"
        print(f"  segment {i + 1} ({kind}): {np.abs(seg).mean():.4f}")

    # equal-length runs stack into the N x T x M tensor the trainers use
    more = data.gen_sine_square(num_patterns=4, segments_per_pattern=6,
                                segment_len=100, seed=4)
    stack = esn.stack_states([esn.run(reservoir, s.values)
                              for s in more.samples])
    print("\nstacked state tensor for 4 patterns:", stack.shape)


if __name__ == "__main__":
    main()
