"""Sine-vs-square classification with all four output layers.

Trains one reservoir per repetition and compares the ridge readout
(pointwise and block rules) against the nearest-core tensor rules on
held-out signals, at a small and a moderate reservoir size.
"""

import math

from esn_tucker.harness import ExperimentConfig, run_experiment, summarize


def main():
    cfg = ExperimentConfig(
        dataset={"kind": "sine_square", "train_patterns": 10,
                 "test_patterns": 10, "segments_per_pattern": 30,
                 "segment_len": 100},
        methods=("weights_pointwise", "weights_block",
                 "tensor_global", "tensor_perclass"),
        n_grid=(10, 50),
        activations=("tanh",),
        betas=(math.pi / 4,),
        j1_grid=("max(1, N // 5)",),
        j2_grid=(5,),
        alpha=0.5,
        ridge_lambda=1e-6,
        repetitions=5,
        master_seed=0,
    )
    rows = run_experiment(cfg)

    print("test accuracy, mean (std) over 5 repetitions:\n")
    print(f"{'method':18} {'N=10':>15} {'N=50':>15}")
    for method in cfg.methods:
        cells = []
        for n in cfg.n_grid:
            row = next(r for r in rows
                       if r.method == method and r.split == "test"
                       and r.n_nodes == n)
            cells.append(f"{row.mean_accuracy:.2f} "
                         f"({row.std_accuracy:.2f})")
        print(f"{method:18} {cells[0]:>15} {cells[1]:>15}")

    print("\nfull CSV (first lines):")
    for line in summarize(rows).splitlines()[:5]:
        print(" ", line)


if __name__ == "__main__":
    main()
