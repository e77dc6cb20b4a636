"""Compare the compiled and pure-Python kernels on the heavier sweeps.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--lattices mo:2,boolean:3,mo:3] [--budget 20000]

Each row also checks that both backends produced the same report.
"""
import argparse
import time

from clopen.kernels import COMPILED_AVAILABLE
from clopen.lattice import make_boolean, make_mo
from clopen.laws import adjoint_laws, star_laws
from clopen.logic import validation_report
from clopen.presheaf import spectral_presheaf


def build(name):
    kind, _, n = name.partition(":")
    return make_mo(int(n)) if kind == "mo" else make_boolean(int(n))


def workloads(budget):
    return {
        "star laws": lambda P: star_laws(P),
        "adjoint laws": lambda P: adjoint_laws(P),
        "logic (star)": lambda P: validation_report(P, "star", budget=budget, compare=False),
        "logic (heyting)": lambda P: validation_report(P, "heyting", budget=budget, compare=False),
    }


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return out, best


def _digest(result):
    return repr(result.to_dict())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--lattices", default="mo:2,boolean:3,mo:3")
    ap.add_argument("--budget", type=int, default=20_000,
                    help="valuations per logic check before sampling")
    args = ap.parse_args(argv)
    if not COMPILED_AVAILABLE:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")

    print(f"{'lattice':<10} {'workload':<16} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name in args.lattices.split(","):
        L = build(name)
        backends = {b: spectral_presheaf(L, backend=b) for b in ("python", "cython")}
        for label, work in workloads(args.budget).items():
            results, best = {}, {}
            for b, P in backends.items():
                results[b], best[b] = best_of(lambda: work(P), args.repeat)
            same = _digest(results["python"]) == _digest(results["cython"])
            ratio = best["python"] / best["cython"] if best["cython"] else float("inf")
            flag = "" if same else "  MISMATCH"
            print(f"{name:<10} {label:<16} {best['python']:>10.4f} {best['cython']:>10.4f} "
                  f"{ratio:>7.1f}x{flag}", flush=True)


if __name__ == "__main__":
    main()
