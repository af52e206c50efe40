"""Command-line interface: ``netclust {cluster,path,simulate,baseline}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from .admm import admm_solve, refit_centroids
from .baselines import (adjusted_rand_index, edge_features, kmeans,
                        spectra_features)
from .errors import PathTruncated
from .io import atomic_write_text, load_dataset, save_dataset, write_json
from .path import build_dendrogram, compute_path
from .prox import schatten_order
from .synth import (SbmSpec, make_changepoint_dataset,
                    make_sbm_dataset, make_two_cluster_dataset)
from .weights import chain_weights, hybrid_weights, rbf_weights

logger = logging.getLogger("netclust")


def _bool(s):
    if isinstance(s, bool):
        return s
    v = s.strip().lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {s!r}")


def _phi(s):
    return s if s == "auto" else float(s)


def _q_label(q):
    return "inf" if q == np.inf else str(int(q))


def _add_weight_args(sp):
    sp.add_argument("--weights", choices=["rbf", "chain", "hybrid"],
                    default="rbf")
    sp.add_argument("--phi", type=_phi, default="auto",
                    help="RBF scale, or 'auto' (1 / median squared distance)")
    sp.add_argument("--knn", type=int, default=None,
                    help="RBF nearest-neighbour truncation (default: T-1)")
    sp.add_argument("--alpha", type=float, default=0.5,
                    help="hybrid mix: alpha*rbf + (1-alpha)*chain")


def make_weights(x, args):
    if args.weights == "chain":
        return chain_weights(x.T)
    rbf = rbf_weights(x, phi=args.phi, k=args.knn)
    if args.weights == "rbf":
        return rbf
    return hybrid_weights(rbf, chain_weights(x.T), args.alpha)


def run_cluster(args):
    x = load_dataset(args.input)
    w = make_weights(x, args)
    q = schatten_order(args.q)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = admm_solve(x, w, args.lam, q=q, rho=args.rho,
                         max_iter=args.max_iter)
    for wm in caught:
        logger.warning("%s", wm.message)
    cents = refit_centroids(x, res.assignment) if args.refit else res.centroids
    out = Path(args.out)
    st = res.state
    write_json(out / "assignment.json", {
        "labels": res.assignment.labels.tolist(),
        "K": res.assignment.K,
        "lambda": args.lam,
        "q": _q_label(q),
        "weights": args.weights,
        "refit": args.refit,
        "diagnostics": {
            "iterations": st.k,
            "converged": st.converged,
            "primal_residual": st.primal_residual[-1] if st.primal_residual else 0.0,
            "dual_residual": st.dual_residual[-1] if st.dual_residual else 0.0,
            "warnings": [str(wm.message) for wm in caught],
        },
    })
    save_dataset(cents, out / "centroids", prefix="centroid")
    return 0


def run_path(args):
    x = load_dataset(args.input)
    w = make_weights(x, args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        path = compute_path(x, w, q=args.q, multiplier=args.multiplier,
                            inner_iters=args.inner_iters,
                            max_points=args.max_points, rho=args.rho)
    for wm in caught:
        logger.warning("%s", wm.message)
    dend = build_dendrogram(path)
    lines = ["lambda,K,labels,raw_K,raw_labels"]
    for pt, mono in zip(path.points, path.monotone):
        lines.append(",".join([
            repr(float(pt.lam)), str(mono.K),
            ";".join(map(str, mono.labels)),
            str(pt.assignment.K), ";".join(map(str, pt.assignment.labels))]))
    out = Path(args.out)
    atomic_write_text(out / "path.csv", "\n".join(lines) + "\n")
    truncated = [str(wm.message) for wm in caught
                 if issubclass(wm.category, PathTruncated)]
    write_json(out / "dendrogram.json", {
        "n_leaves": dend.n_leaves,
        "merges": [{"height": m.height, "left": m.left, "right": m.right,
                    "new_id": m.new_id} for m in dend.merges],
        "monotone_violations": path.monotone_violations,
        "n_points": len(path),
        "q": _q_label(schatten_order(args.q)),
        "warning": truncated[0] if truncated else None,
    })
    return 0


def _parse_matrix(s):
    return np.array([[float(v) for v in row.split(",")] for row in s.split(";")])


def run_simulate(args):
    if args.model == "graphon-two-cluster":
        ds = make_two_cluster_dataset(args.p, args.T, args.seed,
                                      shared_perm=args.shared_perm)
    elif args.model == "graphon-changepoint":
        ds = make_changepoint_dataset(args.p, args.T, args.change_after or args.T // 2,
                                      args.seed)
    else:
        B = _parse_matrix(args.B)
        K = B.shape[0]
        sizes = [args.p // K + (1 if b < args.p % K else 0) for b in range(K)]
        ds = make_sbm_dataset(SbmSpec(tuple(sizes), B), args.T, args.seed)
    out = Path(args.out)
    save_dataset(ds.tensor, out)
    write_json(out / "truth.json", {
        "labels": ds.labels.tolist(),
        "permutations": ds.permutations.tolist(),
        "model": args.model,
        "seed": args.seed,
    })
    return 0


def run_baseline(args):
    x = load_dataset(args.input)
    feats = spectra_features(x) if args.method == "kmeans-spectra" else edge_features(x)
    res = kmeans(feats, args.k, restarts=args.restarts, seed=args.seed)
    out = Path(args.out)
    write_json(out / "assignment.json", {
        "labels": res.assignment.labels.tolist(),
        "K": res.assignment.K,
        "method": args.method,
        "inertia": res.inertia,
        "degenerate": res.degenerate,
    })
    truth = Path(args.input).parent / "truth.json"
    if truth.exists():
        labels = json.loads(truth.read_text())["labels"]
        write_json(out / "ari.json",
                   {"ari": adjusted_rand_index(labels, res.assignment)})
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="netclust",
                                 description="Convex clustering of graph collections.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cluster", help="solve at one penalty level")
    c.add_argument("--input", required=True)
    c.add_argument("--lambda", dest="lam", type=float, required=True)
    c.add_argument("--q", default="1", choices=["1", "2", "inf"])
    _add_weight_args(c)
    c.add_argument("--rho", type=float, default=1.0)
    c.add_argument("--max-iter", type=int, default=10_000)
    c.add_argument("--refit", type=_bool, default=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=run_cluster)

    p = sub.add_parser("path", help="full regularization path and dendrogram")
    p.add_argument("--input", required=True)
    p.add_argument("--q", default="1", choices=["1", "2", "inf"])
    _add_weight_args(p)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--multiplier", type=float, default=1.05)
    p.add_argument("--inner-iters", type=int, default=1)
    p.add_argument("--max-points", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_path)

    s = sub.add_parser("simulate", help="write a synthetic dataset")
    s.add_argument("--model", required=True,
                   choices=["graphon-two-cluster", "graphon-changepoint", "sbm"])
    s.add_argument("--p", type=int, default=25)
    s.add_argument("--T", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shared-perm", type=_bool, default=True)
    s.add_argument("--change-after", type=int, default=None)
    s.add_argument("--B", default="0.8,0.1;0.1,0.8",
                   help="SBM block matrix, rows separated by ';'")
    s.add_argument("--out", required=True)
    s.set_defaults(func=run_simulate)

    b = sub.add_parser("baseline", help="k-means on spectra or edges")
    b.add_argument("--input", required=True)
    b.add_argument("--method", required=True,
                   choices=["kmeans-spectra", "kmeans-edges"])
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--restarts", type=int, default=20)
    b.add_argument("--out", required=True)
    b.set_defaults(func=run_baseline)
    return ap


def _limit_threads():
    n = os.environ.get("NETCLUST_THREADS")
    if not n:
        return None
    from threadpoolctl import threadpool_limits
    return threadpool_limits(int(n))


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    _limit_threads()
    try:
        return args.func(args)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"netclust {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
