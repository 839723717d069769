#!/usr/bin/env python3
"""Build the two-sample petal-width dataset from the standard Iris CSV.

Petal width is converted from centimeters to millimeters (x10). Sample 1
holds the 50 setosa records plus the first 40 versicolor records in dataset
order (n1 = 90); sample 2 holds the 50 virginica records plus the remaining
10 versicolor records (n2 = 60). Versicolor is the component shared by both
samples; the first-40/last-10 split is a fixed convention so the output is
reproducible byte for byte.

Usage: prepare_iris.py [iris.csv] [out.csv]
"""
import csv
import sys


def main() -> None:
    src = sys.argv[1] if len(sys.argv) > 1 else "data/iris.csv"
    dst = sys.argv[2] if len(sys.argv) > 2 else "data/iris_two_sample.csv"
    by_species = {"setosa": [], "versicolor": [], "virginica": []}
    with open(src, newline="") as f:
        for row in csv.DictReader(f):
            by_species[row["species"]].append(10.0 * float(row["petal_width"]))
    for name, vals in by_species.items():
        if len(vals) != 50:
            raise SystemExit(f"expected 50 {name} records, found {len(vals)}")
    sample1 = by_species["setosa"] + by_species["versicolor"][:40]
    sample2 = by_species["virginica"] + by_species["versicolor"][40:]
    with open(dst, "w") as f:
        f.write("value,sample\n")
        for v in sample1:
            f.write(f"{v:.6g},1\n")
        for v in sample2:
            f.write(f"{v:.6g},2\n")
    print(f"wrote {dst}: n1={len(sample1)}, n2={len(sample2)}")


if __name__ == "__main__":
    main()
