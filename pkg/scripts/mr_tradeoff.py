"""Rounds and peak machine memory of the MapReduce pipeline across machine exponents."""

import argparse
import math

from subquad.instances import gen_pair
from subquad.mapreduce import ClusterConfig, alpha_crit, mr_edit
from subquad.strings import edit_distance


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--ops", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--xs", default="0.5,0.65,0.8,0.889,1.0")
    args = p.parse_args()

    s1, s2 = gen_pair(args.n, args.ops, args.seed)
    total = len(s1) + len(s2)
    exact = edit_distance(s1, s2)
    print(f"n={total} exact={exact}")
    print(f"{'x':>6} {'delta*':>8} {'machines':>9} {'cap':>9} {'peak':>9} {'rounds':>7} {'ratio':>6}")
    for x in (float(v) for v in args.xs.split(",")):
        cfg = ClusterConfig.for_input(total, x=x, eps=args.eps)
        res = mr_edit(s1, s2, args.eps, cfg)
        snap = res.meter_snapshot
        crit = total ** (-alpha_crit(x))
        ratio = res.estimate / max(exact, 1)
        print(
            f"{x:>6.3f} {crit:>8.4f} {cfg.machines:>9d} {cfg.mem_per_machine:>9d} "
            f"{snap['max_machine_mem']:>9d} {snap['rounds']:>7d} {ratio:>6.3f}"
        )
    print(f"round budget 12*log2(n) = {12 * math.log2(total):.0f}")


if __name__ == "__main__":
    main()
