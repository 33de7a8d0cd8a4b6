"""Charged Grover units of threshold estimation against metric size, with log-log slopes."""

import argparse
import json

from subquad.experiments import query_growth


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ns", default="64,128,256,512")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--eps", type=float, default=0.1, help="epsilon of the fast variant")
    p.add_argument("--out", default=None, help="write JSON here")
    args = p.parse_args()

    ns = [int(v) for v in args.ns.split(",")]
    results = [
        query_growth(ns, range(args.seeds), "threshold"),
        query_growth(ns, range(args.seeds), "fast", args.eps),
    ]
    for res in results:
        print(f"{res['variant']:>9}  slope {res['slope']:.3f}")
        for n, c in zip(res["n"], res["charged"]):
            print(f"    n={n:<5d} charged={c:12.1f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
