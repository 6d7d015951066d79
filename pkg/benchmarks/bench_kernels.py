#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the Viterbi lattice search and the MaxEnt objective/gradient on
synthetic workloads sized like a real tagging run and prints a timing
table. Usage:

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from nomadj.kernels import available_backends


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def viterbi_workload(rng, n_sentences, sentence_len, n_states):
    emit = [np.log(rng.dirichlet(np.ones(n_states), size=sentence_len))
            for _ in range(n_sentences)]
    start = np.log(rng.dirichlet(np.ones(n_states)))
    trans = np.log(rng.dirichlet(np.ones(n_states), size=n_states))
    stop = np.log(rng.dirichlet(np.ones(2), size=n_states)[:, 0])
    return emit, start, np.ascontiguousarray(trans), stop


def maxent_workload(rng, n_examples, n_predicates, n_labels, active):
    indices = rng.integers(0, n_predicates, size=n_examples * active).astype(np.int32)
    indptr = np.arange(0, n_examples * active + 1, active, dtype=np.int32)
    gold = rng.integers(0, n_labels, size=n_examples).astype(np.int32)
    weights = rng.normal(scale=0.1, size=(n_predicates, n_labels))
    return indptr, indices, gold, np.ascontiguousarray(weights)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("note: compiled extension not built; only the python backend runs")

    rng = np.random.default_rng(0)
    scale = 0.2 if args.quick else 1.0
    n_sent = int(200 * scale) or 1
    vit = viterbi_workload(rng, n_sent, sentence_len=25, n_states=45)
    mx = maxent_workload(rng, n_examples=int(20000 * scale) or 100,
                         n_predicates=5000, n_labels=8, active=13)

    rows = []
    for name, impl in sorted(backends.items()):
        emit, start, trans, stop = vit
        t_vit = _time(lambda: [impl.viterbi_kernel(e, start, trans, stop)
                               for e in emit], repeats=3)
        t_mx = _time(lambda: impl.maxent_obj_grad_kernel(*mx, True), repeats=3)
        rows.append((name, t_vit, t_mx))

    print(f"{'backend':<10}{'viterbi (s)':>14}{'maxent grad (s)':>18}")
    for name, t_vit, t_mx in rows:
        print(f"{name:<10}{t_vit:>14.4f}{t_mx:>18.4f}")
    if len(rows) == 2:
        by_name = {r[0]: r for r in rows}
        pys = by_name["python"]
        cys = by_name["compiled"]
        print(f"{'speedup':<10}{pys[1] / cys[1]:>13.1f}x{pys[2] / cys[2]:>17.1f}x")

    # agreement check on one instance of each workload
    if len(backends) == 2:
        e = vit[0][0]
        paths = {n: b.viterbi_kernel(e, vit[1], vit[2], vit[3]) for n, b in backends.items()}
        assert paths["python"][0] == paths["compiled"][0]
        lls = {n: b.maxent_obj_grad_kernel(*mx, True)[0] for n, b in backends.items()}
        assert abs(lls["python"] - lls["compiled"]) <= 1e-6 * abs(lls["python"])
        print("backend agreement: ok")


if __name__ == "__main__":
    main()
