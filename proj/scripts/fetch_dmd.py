#!/usr/bin/env python3
"""Convert the Duchenne muscular dystrophy carrier data to group,ck,h CSV.

The source is the "biomed" dataset (Andrews and Herzberg, Table 38.1),
distributed by StatLib as whitespace-separated records. Download it yourself
and pass the local path; this script does not touch the network.

    python3 scripts/fetch_dmd.py biomed.data --out data/dmd.csv

Column positions are 0-based and configurable because mirrors of the file
differ in layout. Rows with a missing CK or H value are reported and the
conversion stops, since dropping them changes the sample sizes (134 and 75).
"""

import argparse
import csv
import sys


def parse_args(argv):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("source", help="local copy of the dataset")
    p.add_argument("--out", default="data/dmd.csv")
    p.add_argument("--group-col", type=int, default=None,
                   help="column holding the carrier indicator; omit when carriers and "
                        "noncarriers are given as separate files via --carriers")
    p.add_argument("--carrier-value", default="1", help="value of --group-col that marks a carrier")
    p.add_argument("--carriers", help="separate file of carrier records (source then holds noncarriers)")
    p.add_argument("--ck-col", type=int, default=4)
    p.add_argument("--h-col", type=int, default=5)
    p.add_argument("--missing", default="?,-9,NA,", help="comma-separated tokens meaning missing")
    p.add_argument("--skip", type=int, default=0, help="header lines to skip in each file")
    return p.parse_args(argv)


def records(path, skip):
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if lineno <= skip or not line.strip():
                continue
            yield lineno, line.replace(",", " ").split()


def convert(args):
    missing = set(args.missing.split(","))
    rows, problems = [], []

    def take(path, fixed_group=None):
        for lineno, fields in records(path, args.skip):
            try:
                if fixed_group is None:
                    group = "carrier" if fields[args.group_col] == args.carrier_value else "noncarrier"
                else:
                    group = fixed_group
                ck, h = fields[args.ck_col], fields[args.h_col]
            except IndexError:
                problems.append(f"{path}:{lineno}: too few fields")
                continue
            if ck in missing or h in missing:
                problems.append(f"{path}:{lineno}: missing CK or H")
                continue
            rows.append((group, float(ck), float(h)))

    if args.carriers:
        take(args.source, "noncarrier")
        take(args.carriers, "carrier")
    elif args.group_col is not None:
        take(args.source)
    else:
        sys.exit("give either --group-col or --carriers")

    if problems:
        sys.exit("\n".join(problems))
    counts = {g: sum(r[0] == g for r in rows) for g in ("noncarrier", "carrier")}
    if counts != {"noncarrier": 134, "carrier": 75}:
        print(f"warning: group sizes {counts}, expected 134 noncarriers and 75 carriers", file=sys.stderr)

    rows.sort(key=lambda r: r[0] != "noncarrier")
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["group", "ck", "h"])
        for g, ck, h in rows:
            w.writerow([g, repr(ck), repr(h)])
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    convert(parse_args(sys.argv[1:]))
