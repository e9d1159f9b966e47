"""Configuration-driven experiment runner.

Each registered experiment regenerates the data behind one figure or table
as a tidy row set; the CLI (or a caller) writes it as CSV or JSON.  Rows
carry the seed and every parameter they depend on, and all randomness is
derived from the recorded seed, so re-running any row reproduces it byte
for byte.

Spec files are flat ``key = value`` text with ``#`` comments; values stay
strings until the experiment coerces them.
"""

from __future__ import annotations

import csv
import json
import os
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from . import analytic, optimize, simulate
from .model import CodingPolicy, SystemModel, ValidationError

__all__ = [
    "ExperimentSpec",
    "EXPERIMENTS",
    "parse_spec_file",
    "run_experiment",
    "run_random_error_study",
    "derive_seed",
    "write_rows_csv",
    "write_rows_json",
    "OUTPUT_DIR_ENV",
]

OUTPUT_DIR_ENV = "SENSEFUSE_OUTPUT_DIR"

# SNR substituted for a limiting regime when evaluating a table formula
# numerically; the channel epsilons are more extreme because the limit
# tables take the channel-SNR limit first (the corner limits of the coded
# table do not commute).
_OB_SUBST = {"zero": 1e-9, "inf": 1e9}
_CH_SUBST = {"zero": 1e-18, "inf": 1e18}


@dataclass(frozen=True)
class ExperimentSpec:
    """A named experiment, its parameter overrides, and an output path."""

    name: str
    params: dict = field(default_factory=dict)
    output_path: Optional[str] = None


def parse_spec_file(path) -> ExperimentSpec:
    """Read a flat key=value spec file; `experiment` names the experiment,
    `output` optionally names the output file, everything else is a param."""
    name = None
    output = None
    params: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "experiment":
            name = value
        elif key == "output":
            output = value
        else:
            params[key] = value
    if name is None:
        raise ValidationError(f"{path}: missing 'experiment = <name>' line")
    return ExperimentSpec(name=name, params=params, output_path=output)


def derive_seed(seed: int, *key) -> int:
    """Stable 64-bit sub-seed for a labeled piece of an experiment.

    String labels go through crc32 (process-independent, unlike hash())."""
    parts = tuple(k if isinstance(k, (int, np.integer))
                  else zlib.crc32(str(k).encode("utf-8")) for k in key)
    digest = np.random.SeedSequence(entropy=(int(seed),) + parts)
    return int(digest.generate_state(1, np.uint64)[0])


def _get(params: dict, key: str, default, cast):
    if key not in params:
        return default
    try:
        return cast(params[key])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad value for parameter {key!r}: {params[key]!r}") from exc


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(part) for part in str(text).split(",") if part.strip()]


_DEFAULT_CH_SPEC = simulate.FoldedNormalSpec(target_mean=5.0, std_dev=1.5)
_DEFAULT_OB_SPEC = simulate.FoldedNormalSpec(target_mean=7.0, std_dev=1.5)


def _instance_specs(params: dict):
    ch = simulate.FoldedNormalSpec(
        target_mean=_get(params, "gamma_ch", _DEFAULT_CH_SPEC.target_mean, float),
        std_dev=_get(params, "sigma1", _DEFAULT_CH_SPEC.std_dev, float))
    ob = simulate.FoldedNormalSpec(
        target_mean=_get(params, "gamma_ob", _DEFAULT_OB_SPEC.target_mean, float),
        std_dev=_get(params, "sigma2", _DEFAULT_OB_SPEC.std_dev, float))
    return ch, ob


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _fig3_d_vs_k(params: dict, seed: int):
    k_min = _get(params, "k_min", 1, int)
    k_max = _get(params, "k_max", 30, int)
    gob = _get(params, "gamma_ob", 7.0, float)
    gch = _get(params, "gamma_ch", 5.0, float)
    gt = _get(params, "gamma_total", 5.0, float)
    st = _get(params, "sigma_theta_sq", 1.0, float)
    rows = []
    for k in range(k_min, k_max + 1):
        d_ct, d_ut = analytic.total_power_distortions(k, gob, gt, st)
        rows.append({
            "seed": seed, "k": k, "gamma_ob": gob, "gamma_ch": gch,
            "gamma_total": gt,
            "d_coded": analytic.coded_homo_distortion(k, gob, gch, st),
            "d_uncoded": analytic.uncoded_homo_distortion(k, gob, gch, st),
            "d_coded_total": d_ct,
            "d_uncoded_total": d_ut,
        })
    return rows


def _fig4_snr_surface(params: dict, seed: int):
    k = _get(params, "k", 3, int)
    grid = _get(params, "grid", 40, int)
    lo = _get(params, "snr_min", 0.1, float)
    hi = _get(params, "snr_max", 100.0, float)
    st = _get(params, "sigma_theta_sq", 1.0, float)
    snrs = np.geomspace(lo, hi, grid)
    rows = []
    for gob in snrs:
        for gch in snrs:
            rows.append({
                "seed": seed, "k": k,
                "gamma_ob": float(gob), "gamma_ch": float(gch),
                "d_coded": analytic.coded_homo_distortion(k, gob, gch, st),
                "d_uncoded": analytic.uncoded_homo_distortion(k, gob, gch, st),
                "coded_wins": int(analytic.coded_wins_homo(k, gob, gch)),
            })
    return rows


def _fig5_fading(params: dict, seed: int):
    k_min = _get(params, "k_min", 1, int)
    k_max = _get(params, "k_max", 30, int)
    nu = _get(params, "nu", 0.9, float)
    gch = _get(params, "gamma_ch", 5.0, float)
    gob = _get(params, "gamma_ob", 7.0, float)
    sigma1 = _get(params, "sigma1", 1.5, float)
    sigma2 = _get(params, "sigma2", 1.5, float)
    n_blocks = _get(params, "n_blocks", 200_000, int)
    st = _get(params, "sigma_theta_sq", 1.0, float)
    ch_spec = simulate.FoldedNormalSpec(gch, sigma1)
    ob_spec = simulate.FoldedNormalSpec(gob, sigma2)
    rows = []
    for k in range(k_min, k_max + 1):
        homo = SystemModel.homogeneous(k, gob, gch, st)
        hetero = simulate.generate_instance(
            k, ch_spec, ob_spec, derive_seed(seed, "instance", k), st)
        # the homogeneous closed form averages over a block-wide gain, so its
        # MC companion must share the gain; the heterogeneous system fades
        # independently per node
        mc_homo = simulate.fading_empirical_distortion(
            homo, nu, n_blocks, derive_seed(seed, "homo", k), shared_gain=True)
        mc_hetero = simulate.fading_empirical_distortion(
            hetero, nu, n_blocks, derive_seed(seed, "hetero", k))
        rows.append({
            "seed": seed, "k": k, "nu": nu, "gamma_ob": gob, "gamma_ch": gch,
            "n_blocks": n_blocks,
            "d_fading_th": analytic.fading_coded_homo_distortion(k, gob, gch, nu, st),
            "d_fading_mc": mc_homo.mean_sq_error,
            "d_fading_mc_stderr": mc_homo.std_error,
            "d_homo": analytic.coded_homo_distortion(k, gob, gch, st),
            "d_hetero": analytic.coded_hetero_distortion(hetero),
            "d_fading_hetero_mc": mc_hetero.mean_sq_error,
            "d_fading_hetero_mc_stderr": mc_hetero.std_error,
        })
    return rows


def _searches_for_instance(model, group_sizes):
    out = {
        "global": optimize.global_search(model),
        "pure": optimize.pure_greedy(model),
        "sorted": optimize.sorted_greedy(model),
    }
    for size in group_sizes:
        out[f"group{size}"] = optimize.group_greedy(model, size)
    return out


def _fig6_hybrid(params: dict, seed: int):
    k_min = _get(params, "k_min", 2, int)
    k_max = _get(params, "k_max", 10, int)
    n_sim = _get(params, "n_sim", 300, int)
    group_size = _get(params, "group_size", 10, int)
    ch_spec, ob_spec = _instance_specs(params)
    rows = []
    for k in range(k_min, k_max + 1):
        sums = {name: 0.0 for name in
                ("opt", "coded", "uncoded", "pure", "sorted", "group")}
        for i in range(n_sim):
            model = simulate.generate_instance(
                k, ch_spec, ob_spec, derive_seed(seed, "instance", k, i))
            searches = _searches_for_instance(model, [group_size])
            sums["opt"] += searches["global"].distortion
            sums["coded"] += analytic.coded_hetero_distortion(model)
            sums["uncoded"] += analytic.uncoded_hetero_distortion(model)
            sums["pure"] += searches["pure"].distortion
            sums["sorted"] += searches["sorted"].distortion
            sums["group"] += searches[f"group{group_size}"].distortion
        rows.append({
            "seed": seed, "k": k, "n_sim": n_sim, "group_size": group_size,
            "nd_coded": sums["coded"] / sums["opt"],
            "nd_uncoded": sums["uncoded"] / sums["opt"],
            "nd_pure": sums["pure"] / sums["opt"],
            "nd_sorted": sums["sorted"] / sums["opt"],
            "nd_group": sums["group"] / sums["opt"],
        })
    return rows


def _greedy_metrics(k: int, n_sim: int, group_sizes, seed: int,
                    ch_spec, ob_spec):
    """Normalized distortion and policy error rate of every algorithm over
    n_sim random instances with K nodes."""
    names = ["pure", "sorted"] + [f"group{size}" for size in group_sizes]
    dists = {name: [] for name in names}
    policies = {name: [] for name in names}
    opt_dists = []
    opt_policies = []
    for i in range(n_sim):
        model = simulate.generate_instance(
            k, ch_spec, ob_spec, derive_seed(seed, "instance", k, i))
        searches = _searches_for_instance(model, group_sizes)
        opt_dists.append(searches["global"].distortion)
        opt_policies.append(searches["global"].policy)
        for name in names:
            dists[name].append(searches[name].distortion)
            policies[name].append(searches[name].policy)
    metrics = {}
    for name in names:
        metrics[name] = {
            "normalized_distortion": optimize.normalized_distortion(
                dists[name], opt_dists),
            "policy_error_rate": optimize.policy_error_rate(
                policies[name], opt_policies),
        }
    return metrics, opt_dists, opt_policies


def _fig7_greedy(params: dict, seed: int):
    sweep = _get(params, "sweep", "k", str)
    ch_spec, ob_spec = _instance_specs(params)
    rows = []
    if sweep == "k":
        k_min = _get(params, "k_min", 2, int)
        k_max = _get(params, "k_max", 12, int)
        n_sim = _get(params, "n_sim", 10_000, int)
        group_sizes = _int_list(_get(params, "group_sizes", "1,10,32", str))
        grid = [(k, n_sim) for k in range(k_min, k_max + 1)]
    elif sweep == "l":
        k = _get(params, "k", 10, int)
        n_sim = _get(params, "n_sim", 5_000, int)
        group_sizes = _int_list(_get(params, "group_sizes", "1,2,4,8,16,32", str))
        grid = [(k, n_sim)]
    else:
        raise ValidationError(f"unknown sweep {sweep!r} (expected 'k' or 'l')")
    for k, n in grid:
        metrics, _, _ = _greedy_metrics(k, n, group_sizes, seed, ch_spec, ob_spec)
        for name, values in metrics.items():
            group_size = int(name[5:]) if name.startswith("group") else 0
            algorithm = "group" if name.startswith("group") else name
            rows.append({
                "seed": seed, "sweep": sweep, "k": k, "n_sim": n,
                "algorithm": algorithm, "group_size": group_size,
                "normalized_distortion": values["normalized_distortion"],
                "policy_error_rate": values["policy_error_rate"],
            })
    return rows


def run_random_error_study(k: int, group_sizes, n_sim: int, seed: int,
                           ch_spec: simulate.FoldedNormalSpec = _DEFAULT_CH_SPEC,
                           ob_spec: simulate.FoldedNormalSpec = _DEFAULT_OB_SPEC):
    """Group greedy versus random policy errors.

    For each group size L the group greedy policy error rate eps(L) is
    measured against the exhaustive optimum; random policies are then
    produced by flipping each optimal bit independently with probability
    eps(L), eps(L)/2, and eps(L)/3, and all four families are reported as
    normalized distortions.
    """
    if k > optimize.GLOBAL_SEARCH_MAX_NODES:
        raise ValidationError(
            f"random error study needs the exhaustive optimum; K <= "
            f"{optimize.GLOBAL_SEARCH_MAX_NODES} required, got {k}")
    group_sizes = _int_list(group_sizes)
    models = [simulate.generate_instance(
        k, ch_spec, ob_spec, derive_seed(seed, "instance", k, i))
        for i in range(n_sim)]
    opt = [optimize.global_search(m) for m in models]
    opt_dists = [r.distortion for r in opt]
    mean_opt = sum(opt_dists) / n_sim

    rows = []
    for size in group_sizes:
        group = [optimize.group_greedy(m, size) for m in models]
        eps = optimize.policy_error_rate(
            [r.policy for r in group], [r.policy for r in opt])
        nd_group = optimize.normalized_distortion(group, opt_dists)
        row = {
            "seed": seed, "k": k, "n_sim": n_sim, "group_size": size,
            "policy_error_rate": eps, "nd_group": nd_group,
        }
        for divisor, label in ((1, "full"), (2, "half"), (3, "third")):
            prob = eps / divisor
            rng = np.random.Generator(np.random.Philox(
                np.random.SeedSequence(derive_seed(seed, "flip", size, divisor))))
            total = 0.0
            for model, result in zip(models, opt):
                flips = rng.random(k) < prob
                bits = tuple(int(b) ^ int(f) for b, f in zip(result.policy.rho, flips))
                total += analytic.hybrid_distortion(model, CodingPolicy(bits)).total
            row[f"flip_prob_{label}"] = prob
            row[f"nd_flip_{label}"] = total / n_sim / mean_opt
        rows.append(row)
    return rows


def _fig8_random_errors(params: dict, seed: int):
    k = _get(params, "k", 10, int)
    n_sim = _get(params, "n_sim", 5_000, int)
    group_sizes = _int_list(_get(params, "group_sizes", "1,2,4,8,16,32", str))
    ch_spec, ob_spec = _instance_specs(params)
    return run_random_error_study(k, group_sizes, n_sim, seed,
                                  ch_spec=ch_spec, ob_spec=ob_spec)


def _tables_limits(params: dict, seed: int):
    k = _get(params, "k", 4, int)
    gob = _get(params, "gamma_ob", 7.0, float)
    gch = _get(params, "gamma_ch", 5.0, float)
    st = _get(params, "sigma_theta_sq", 1.0, float)
    rows = []
    for scheme in ("coded", "uncoded"):
        for ob_regime in ("inf", "finite", "zero"):
            for ch_regime in ("inf", "finite", "zero"):
                limit = analytic.limiting_distortion(
                    scheme, ob_regime, ch_regime, k, gob, gch, st)
                ob_val = _OB_SUBST.get(ob_regime, gob)
                ch_val = _CH_SUBST.get(ch_regime, gch)
                if scheme == "coded":
                    formula = analytic.coded_homo_distortion(k, ob_val, ch_val, st)
                else:
                    formula = analytic.uncoded_homo_distortion(k, ob_val, ch_val, st)
                rows.append({
                    "seed": seed, "k": k, "scheme": scheme,
                    "ob_regime": ob_regime, "ch_regime": ch_regime,
                    "limit_value": limit, "formula_at_extremes": formula,
                })
    return rows


def _crossover_roots(params: dict, seed: int):
    gob = _get(params, "gamma_ob", 7.0, float)
    gch = _get(params, "gamma_ch", 5.0, float)
    gt = _get(params, "gamma_total", 5.0, float)
    return [
        {"seed": seed, "constraint": "individual", "gamma_ob": gob,
         "power_snr": gch,
         "root": analytic.crossover_node_count(gob, gch)},
        {"seed": seed, "constraint": "total", "gamma_ob": gob,
         "power_snr": gt,
         "root": analytic.crossover_node_count_total(gob, gt)},
    ]


EXPERIMENTS: dict[str, Callable] = {
    "fig3_d_vs_k": _fig3_d_vs_k,
    "fig4_snr_surface": _fig4_snr_surface,
    "fig5_fading": _fig5_fading,
    "fig6_hybrid": _fig6_hybrid,
    "fig7_greedy": _fig7_greedy,
    "fig8_random_errors": _fig8_random_errors,
    "tables_limits": _tables_limits,
    "crossover_roots": _crossover_roots,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows_csv(path, rows) -> None:
    fieldnames = list(rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_format_cell(row[name]) for name in fieldnames])


def write_rows_json(path, spec: ExperimentSpec, seed: int, rows) -> None:
    payload = {
        "spec": {"name": spec.name, "params": dict(spec.params)},
        "seed": seed,
        "rows": rows,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _resolve_output(spec: ExperimentSpec, out: Optional[str], fmt: str) -> Path:
    path = Path(out or spec.output_path or f"{spec.name}.{fmt}")
    if not path.is_absolute():
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def run_experiment(spec: ExperimentSpec, seed: Optional[int] = None,
                   fmt: str = "csv", out: Optional[str] = None) -> Path:
    """Run a registered experiment and write its row table; returns the path."""
    if spec.name not in EXPERIMENTS:
        known = ", ".join(sorted(EXPERIMENTS))
        raise ValidationError(f"unknown experiment {spec.name!r}; known: {known}")
    if fmt not in ("csv", "json"):
        raise ValidationError(f"unknown format {fmt!r} (expected csv or json)")
    if seed is None:
        seed = _get(spec.params, "seed", 0, int)
    rows = EXPERIMENTS[spec.name](spec.params, int(seed))
    path = _resolve_output(spec, out, fmt)
    if fmt == "csv":
        write_rows_csv(path, rows)
    else:
        write_rows_json(path, spec, int(seed), rows)
    return path
