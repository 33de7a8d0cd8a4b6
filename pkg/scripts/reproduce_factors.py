"""Recorded approximation factors next to measured ratios on planted pairs."""

import argparse

import numpy as np

from subquad.approx import ApproxConfig, BootstrapConfig, e_e, edit_approx, edit_approx_boot
from subquad.experiments import factor_table
from subquad.instances import gen_pair
from subquad.mapreduce import mr_edit
from subquad.strings import edit_distance


def measure(ns, seeds, eps, windows=0):
    runners = {
        "quantum7": (lambda a, b: edit_approx(a, b, eps), 7 + eps),
        "bootstrap": (lambda a, b: edit_approx_boot(a, b, BootstrapConfig(min(eps, 0.1))), e_e(min(eps, 0.1))),
        "mr": (lambda a, b: mr_edit(a, b, eps), 3 + eps),
    }
    if windows:
        # explicit windows run the window machinery below its size floor; no envelope is promised there
        forced = ApproxConfig(window_len=windows, gap=max(1, windows // 4), delegate_small_delta=False)
        boot = BootstrapConfig(0.1, window_len=windows, gap=max(1, windows // 4), size_floor=8, delegate_small_delta=False)
        runners["quantum7/win"] = (lambda a, b: edit_approx(a, b, eps, forced), float("nan"))
        runners["boot/win"] = (lambda a, b: edit_approx_boot(a, b, boot), float("nan"))
    for name, (run, bound) in runners.items():
        ratios = []
        for n in ns:
            for seed in range(seeds):
                s1, s2 = gen_pair(n, max(1, n // 16), seed)
                exact = edit_distance(s1, s2)
                ratios.append(run(s1, s2).estimate / max(exact, 1))
        yield name, bound, float(np.max(ratios)), float(np.mean(ratios))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ns", default="64,128,256")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--windows", type=int, default=8, help="explicit window length for the forced rows (0 skips them)")
    args = p.parse_args()

    table = factor_table()
    print("metric estimation factor e_m:", {round(k, 3): v for k, v in table["e_m"].items()})
    print("bootstrapped factor e_e:   ", {round(k, 3): v for k, v in table["e_e"].items()})
    print(f"{'algorithm':<12} {'bound':>10} {'max ratio':>10} {'mean ratio':>11}")
    for name, bound, worst, mean in measure([int(v) for v in args.ns.split(",")], args.seeds, args.eps, args.windows):
        print(f"{name:<12} {bound:>10.1f} {worst:>10.3f} {mean:>11.3f}")


if __name__ == "__main__":
    main()
