"""Digit-image and speaker-cepstrum benchmarks, end to end.

Synthesizes stand-in corpora in the two documented on-disk formats,
then runs the block readout against the global nearest-core rule:
images enter the reservoir column by column as 16-step signals, and
utterances as resampled 12-coefficient cepstrum tracks (plus bias
rows).  Demonstrates the same pipeline the `esn-tucker` CLI drives.
"""

import tempfile
from pathlib import Path

from esn_tucker import data
from esn_tucker.harness import (ExperimentConfig, run_experiment,
                                template_config)


def best_test_accuracy(rows, method, n, sigma=0.0):
    return max(r.mean_accuracy for r in rows
               if r.method == method and r.split == "test"
               and r.n_nodes == n and r.sigma == sigma)


def digits(workdir):
    path = workdir / "digits.txt"
    data.make_digit_file(path, per_class=80, seed=1)
    cfg_dict = template_config("usps")
    cfg_dict["dataset"]["path"] = str(path)
    cfg_dict["repetitions"] = 3  # demo scale; the template uses 10
    cfg = ExperimentConfig.from_dict(cfg_dict)
    rows = run_experiment(cfg)

    print("digit images, best test accuracy over the rank grid:")
    print(f"{'N':>4} {'block readout':>15} {'nearest core':>14}")
    for n in cfg.n_grid:
        w = best_test_accuracy(rows, "weights_block", n)
        t = best_test_accuracy(rows, "tensor_global", n)
        print(f"{n:>4} {w:>15.2f} {t:>14.2f}")


def speakers(workdir):
    train, test = workdir / "ae.train", workdir / "ae.test"
    data.make_vowel_files(train, test, seed=5)
    cfg_dict = template_config("jv")
    cfg_dict["dataset"].update(train_path=str(train), test_path=str(test))
    cfg_dict["repetitions"] = 3
    cfg = ExperimentConfig.from_dict(cfg_dict)
    rows = run_experiment(cfg)

    print("\nspeaker cepstra, test accuracy vs input noise (N=20):")
    print(f"{'sigma':>6} {'block readout':>15} {'nearest core':>14}")
    for sigma in cfg.sigmas:
        w = best_test_accuracy(rows, "weights_block", 20, sigma)
        t = best_test_accuracy(rows, "tensor_global", 20, sigma)
        print(f"{sigma:>6g} {w:>15.2f} {t:>14.2f}")


def main():
    with tempfile.TemporaryDirectory() as tmp:
        workdir = Path(tmp)
        digits(workdir)
        speakers(workdir)


if __name__ == "__main__":
    main()
