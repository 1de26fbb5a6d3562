#!/usr/bin/env python3
"""Regenerate data/studies.csv.

The study-level dataset used by the original analysis is not vendored here.
This script builds a stand-in with the same shape: 116 studies spread over the
eleven diseases, whose pooled false-positive rates sit at the published
per-disease values and whose total negative counts are sized so that the
multinomial bootstrap SE lands near the published per-disease SE.

Drop the real dataset in place of data/studies.csv (same header) to use it
instead; nothing in the library depends on this script.
"""
import csv
import math
import random
import sys

# disease, studies, pooled FP rate, target SE, prevalence, sensitivity
DISEASES = [
    ("breast_cancer", 12, 0.049, 0.0010, 0.006, 0.87),
    ("cervical_cancer", 14, 0.050, 0.0010, 0.010, 0.60),
    ("chlamydia", 13, 0.005, 0.0004, 0.040, 0.94),
    ("colorectal_cancer", 8, 0.113, 0.0130, 0.080, 0.90),
    ("gonorrhea", 11, 0.002, 0.0002, 0.015, 0.95),
    ("hepatitis_b", 7, 0.020, 0.0010, 0.010, 0.97),
    ("hepatitis_c", 9, 0.010, 0.0020, 0.020, 0.97),
    ("hiv", 13, 0.002, 0.0002, 0.006, 0.99),
    ("lung_cancer", 6, 0.207, 0.0010, 0.010, 0.93),
    ("prostate_cancer", 8, 0.102, 0.0030, 0.030, 0.80),
    ("syphilis", 15, 0.003, 0.0003, 0.008, 0.85),
]


def build(seed=20210831):
    rng = random.Random(seed)
    rows = []
    for disease, n_studies, rate, se, prevalence, sensitivity in DISEASES:
        negatives = round(rate * (1 - rate) / se**2)
        weights = [rng.lognormvariate(0.0, 0.8) for _ in range(n_studies)]
        scale = negatives / sum(weights)
        sizes = [max(20, round(w * scale)) for w in weights]
        sizes[sizes.index(max(sizes))] += negatives - sum(sizes)

        target_fp = round(rate * negatives)
        fps = []
        for n in sizes:
            p = min(0.95, rate * rng.lognormvariate(0.0, 0.35))
            fps.append(min(n, round(n * p)))
        # Spread the residue one count at a time, largest studies first.
        order = sorted(range(n_studies), key=lambda i: -sizes[i])
        diff = target_fp - sum(fps)
        step = 1 if diff > 0 else -1
        while diff != 0:
            moved = False
            for i in order:
                if diff == 0:
                    break
                if 0 <= fps[i] + step <= sizes[i]:
                    fps[i] += step
                    diff -= step
                    moved = True
            if not moved:
                sys.exit(f"{disease}: cannot place the false-positive residue")

        for k, (n, fp) in enumerate(zip(sizes, fps), start=1):
            positives = round(n * prevalence / (1 - prevalence))
            tp = round(positives * sensitivity)
            rows.append({
                "study_id": f"{disease}_{k:02d}",
                "disease_id": disease,
                "tp": tp,
                "fn": positives - tp,
                "tn": n - fp,
                "fp": fp,
                "source": f"reconstructed, {disease} study {k}",
            })
    return rows


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/studies.csv"
    rows = build()
    with open(out, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["study_id", "disease_id", "tp", "fn", "tn", "fp", "source"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    by = {}
    for r in rows:
        a = by.setdefault(r["disease_id"], [0, 0])
        a[0] += r["fp"]
        a[1] += r["fp"] + r["tn"]
    for d, (fp, n) in by.items():
        print(f"{d:18s} {fp:7d}/{n:7d} = {fp / n:.5f}", file=sys.stderr)
    print(f"{len(rows)} studies", file=sys.stderr)


if __name__ == "__main__":
    main()
