"""Classify the gallery families against the uniqueness criteria.

For each family the classifier combines capacity regimes, the
lambda-harmonic recursion, the harmonic-coordinate witness and the
degree/ball evidence into three verdicts: Markov uniqueness, essential
self-adjointness, and boundary polarity.  `run_gallery` then compares
every verdict against the stored expected results (exit code 0 only if
all claims hold).

    python3 demos/classification_gallery.py [--budget standard]
"""

import argparse

from iglab.classify import classify
from iglab.gallery import build_family, run_gallery


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", default="standard")
    args = ap.parse_args()

    print(f"{'family':8s} {'Markov-unique':>14s} {'ESA':>16s} "
          f"{'polarity':>10s}  basis")
    for name in ("ex5.1", "ex5.2", "ex5.3a", "ex5.3", "ex5.4"):
        rep = classify(build_family(name), budget=args.budget)
        print(f"{name:8s} {rep.markov_unique.value:>14s} "
              f"{rep.esa.value:>16s} {rep.polarity:>10s}  "
              f"{rep.markov_unique.basis}")
    print()

    result = run_gallery(budget=args.budget)
    for line in result.summary_lines():
        print(line)
    print(f"\ngallery exit code: {result.exit_code}")


if __name__ == "__main__":
    main()
