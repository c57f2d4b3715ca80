"""
End-to-end experiment: dataset -> diagrams / baselines -> feature matrices ->
cross-validated accuracies -> summary table.

Config files are YAML (``version: 1``)::

    version: 1
    output_dir: runs/full
    dataset: {count: 201, size: 128, seed: 0, profiles_per_direction: 3}
    featurizations:
      - {method: cc, target: profile, homology_dims: [0]}
      - {method: pi, target: profile, homology_dims: [0], pca_k: 10}
      - {method: tf, target: surface, homology_dims: [0, 1], mesh_a_size: 10}
      - {method: fft2d-angular, target: surface, prefilter: false}
    classify: {classifiers: [logreg, rforest], folds: 10, seed: 0}

Any key other than ``method``, ``target``, ``homology_dims``, ``pca_k`` and
``id`` in a featurization entry is a method option (see ``METHOD_OPTIONS``).
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from . import io as rio
from .areal_baselines import Gaussian2DConfig, angular_feature_vector, apsd, roughness_surface
from .classify import ClassifierConfig, CvReport, FeatureMatrix, cross_validate
from .errors import ConfigError, DataError, ParameterError
from .persistence import PersistenceDiagram, sublevel_pd_image, sublevel_pd_profile
from .profile_baselines import (PeakConfig, fft_denoise_mean_line, gaussian_mean_line,
                                peak_feature_vector, select_cutoff, RoughnessProfile)
from .roughness_params import ArealParams, ProfileParams, areal_parameters, profile_parameters
from .surface_synth import (GeneratorConfig, Profile, SurfaceGrid, extract_all_profiles,
                            generate_dataset)
from .tda_features import (carlsson_coordinates, fit_persistence_image_config,
                           fit_template_config, persistence_image, template_features)

log = logging.getLogger(__name__)

CONFIG_VERSION = 1

METHOD_TARGETS = {
    "cc": ("profile", "surface"),
    "pi": ("profile", "surface"),
    "tf": ("profile", "surface"),
    "gauss-profile": ("profile",),
    "fft-denoise": ("profile",),
    "fft-peaks": ("profile",),
    "gauss2d-areal": ("surface",),
    "fft2d-angular": ("surface",),
}

METHOD_OPTIONS = {
    "cc": {},
    "pi": {"grid_cols": 20, "grid_rows": 16, "sigma_fraction": 0.1},
    "tf": {"mesh_a_size": 10, "mesh_b_size": 10, "padding": 0.05},
    # synthetic heights read as micrometres, samples this many mm apart
    "gauss-profile": {"spacing_mm": 0.01},
    "fft-denoise": {"threshold": 0.4},
    "fft-peaks": {"mpd_fft": 10, "mpd_psd": 7, "alpha": 0.5, "pct_low": 40.0,
                  "pct_high": 50.0, "n_peaks": 5},
    "gauss2d-areal": {"kernel_size": 21},
    "fft2d-angular": {"prefilter": True, "kernel_size": 21},
}

TDA_METHODS = ("cc", "pi", "tf")


@dataclass(frozen=True)
class FeaturizationSpec:
    method: str
    target: str
    homology_dims: tuple[int, ...] = (0,)
    options: dict = field(default_factory=dict)
    pca_k: int | None = None
    id: str = ""

    @property
    def feature_id(self) -> str:
        """Identifier of the feature matrix (PCA is applied later, per fold)."""
        base = f"{self.target}-{self.method}"
        if self.method in TDA_METHODS:
            base += "-H" + "".join(str(d) for d in self.homology_dims)
        if self.method == "fft2d-angular":
            base += "-gauss" if self.options.get("prefilter", True) else "-direct"
        defaults = METHOD_OPTIONS[self.method]
        for k in sorted(self.options):
            if k != "prefilter" and self.options[k] != defaults.get(k):
                base += f"-{k}{self.options[k]}"
        return base

    @property
    def run_id(self) -> str:
        if self.id:
            return self.id
        return self.feature_id + (f"+pca{self.pca_k}" if self.pca_k else "")


@dataclass(frozen=True)
class ClassifySpec:
    classifiers: tuple[str, ...] = ("logreg", "rforest")
    folds: int = 10
    seed: int = 0
    pca_k: int | None = None


@dataclass(frozen=True)
class PipelineConfig:
    dataset: GeneratorConfig = GeneratorConfig()
    featurizations: tuple[FeaturizationSpec, ...] = ()
    classify: ClassifySpec = ClassifySpec()
    output_dir: str = "runs/default"

    def to_dict(self) -> dict:
        return {
            "version": CONFIG_VERSION,
            "dataset": asdict(self.dataset),
            "featurizations": [
                {"method": f.method, "target": f.target, "homology_dims": list(f.homology_dims),
                 "pca_k": f.pca_k, "id": f.id, **f.options}
                for f in self.featurizations
            ],
            "classify": {"classifiers": list(self.classify.classifiers), "folds": self.classify.folds,
                         "seed": self.classify.seed, "pca_k": self.classify.pca_k},
            "output_dir": self.output_dir,
        }

    def digest(self, exclude_output: bool = True) -> str:
        d = self.to_dict()
        if exclude_output:
            d.pop("output_dir")
        return canonical_digest(d)


def canonical_digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# config parsing

def _int(value, name, lo=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(f"{name}: must be >= {lo}, got {value}")
    return value


def _parse_featurization(i, raw) -> FeaturizationSpec:
    where = f"featurizations[{i}]"
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping")
    raw = dict(raw)
    method = raw.pop("method", None)
    if method not in METHOD_TARGETS:
        raise ConfigError(f"{where}.method: unknown method {method!r}")
    target = raw.pop("target", METHOD_TARGETS[method][0])
    if target not in METHOD_TARGETS[method]:
        raise ConfigError(f"{where}.target: {method} does not support target {target!r}")
    dims = raw.pop("homology_dims", [0])
    if not isinstance(dims, list) or not dims or any(d not in (0, 1) for d in dims):
        raise ConfigError(f"{where}.homology_dims: expected a non-empty subset of [0, 1]")
    dims = tuple(sorted(set(dims)))
    if target == "profile" and dims != (0,):
        raise ConfigError(f"{where}.homology_dims: profiles only have H0")
    pca_k = raw.pop("pca_k", None)
    if pca_k is not None:
        pca_k = _int(pca_k, f"{where}.pca_k", 1)
    fid = raw.pop("id", "") or ""
    if not isinstance(fid, str) or any(c in fid for c in "/\\"):
        raise ConfigError(f"{where}.id: must be a plain string")
    allowed = METHOD_OPTIONS[method]
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown option(s) {unknown} for method {method}")
    options = {**allowed, **raw}
    for k, v in options.items():
        if type(allowed[k]) is bool and not isinstance(v, bool):
            raise ConfigError(f"{where}.{k}: expected true/false")
        if type(allowed[k]) in (int, float) and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise ConfigError(f"{where}.{k}: expected a number")
    spec = FeaturizationSpec(method, target, dims, options, pca_k, fid)
    try:
        _method_objects(spec)
    except (ParameterError, ConfigError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    return spec


def _method_objects(spec):
    o = spec.options
    if spec.method == "fft-peaks":
        return PeakConfig(int(o["mpd_fft"]), int(o["mpd_psd"]), float(o["alpha"]),
                          float(o["pct_low"]), float(o["pct_high"]), int(o["n_peaks"]))
    if spec.method in ("gauss2d-areal", "fft2d-angular"):
        return Gaussian2DConfig(int(o["kernel_size"]))
    if spec.method == "fft-denoise" and not 0 <= o["threshold"] <= 1:
        raise ConfigError("threshold must be in [0, 1]")
    if spec.method == "gauss-profile" and not o["spacing_mm"] > 0:
        raise ConfigError("spacing_mm must be positive")
    if spec.method == "pi" and (o["grid_cols"] < 1 or o["grid_rows"] < 1 or o["sigma_fraction"] <= 0):
        raise ConfigError("grid dims must be >= 1 and sigma_fraction > 0")
    if spec.method == "tf" and (o["mesh_a_size"] < 2 or o["mesh_b_size"] < 2 or o["padding"] < 0):
        raise ConfigError("mesh sizes must be >= 2 and padding >= 0")
    return None


def parse_config(raw: dict, output_dir: str | None = None) -> PipelineConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    raw = dict(raw)
    version = raw.pop("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"version: unsupported config version {version!r}")
    ds = raw.pop("dataset", {}) or {}
    if not isinstance(ds, dict):
        raise ConfigError("dataset: expected a mapping")
    known = set(GeneratorConfig.__dataclass_fields__)
    if set(ds) - known:
        raise ConfigError(f"dataset: unknown keys {sorted(set(ds) - known)}")
    for k, v in ds.items():
        if k == "spacing":
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError("dataset.spacing: expected a number")
        else:
            _int(v, f"dataset.{k}")
    try:
        dataset = GeneratorConfig(**ds)
    except ParameterError as exc:
        raise ConfigError(f"dataset: {exc}") from exc

    feats = raw.pop("featurizations", None)
    if not isinstance(feats, list) or not feats:
        raise ConfigError("featurizations: at least one featurization is required")
    specs = tuple(_parse_featurization(i, f) for i, f in enumerate(feats))
    ids = [s.run_id for s in specs]
    dup = sorted({x for x in ids if ids.count(x) > 1})
    if dup:
        raise ConfigError(f"featurizations: duplicate ids {dup}")

    cl = raw.pop("classify", {}) or {}
    if not isinstance(cl, dict):
        raise ConfigError("classify: expected a mapping")
    unknown = set(cl) - {"classifiers", "folds", "seed", "pca_k"}
    if unknown:
        raise ConfigError(f"classify: unknown keys {sorted(unknown)}")
    clfs = cl.get("classifiers", ["logreg", "rforest"])
    if not isinstance(clfs, list) or not clfs or any(c not in ("logreg", "rforest") for c in clfs):
        raise ConfigError("classify.classifiers: expected a non-empty list from [logreg, rforest]")
    folds = _int(cl.get("folds", 10), "classify.folds", 2)
    if folds > dataset.count:
        raise ConfigError("classify.folds: more folds than surfaces")
    seed = _int(cl.get("seed", 0), "classify.seed", 0)
    pca_k = cl.get("pca_k")
    if pca_k is not None:
        pca_k = _int(pca_k, "classify.pca_k", 1)
    classify = ClassifySpec(tuple(clfs), folds, seed, pca_k)

    out = raw.pop("output_dir", "runs/default")
    if output_dir is not None:
        out = output_dir
    if not isinstance(out, str) or not out:
        raise ConfigError("output_dir: expected a path string")
    if raw:
        raise ConfigError(f"config: unknown top-level keys {sorted(raw)}")
    return PipelineConfig(dataset, specs, classify, out)


def load_config(path, output_dir: str | None = None) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return parse_config(raw, output_dir)


def default_config(output_dir: str = "runs/default") -> PipelineConfig:
    """The full comparison: every featurization on its natural target."""
    raw = yaml.safe_load((Path(__file__).parent / "default_config.yaml").read_text())
    return parse_config(raw, output_dir)


def with_seed(config: PipelineConfig, seed: int) -> PipelineConfig:
    return replace(config, dataset=replace(config.dataset, seed=seed),
                   classify=replace(config.classify, seed=seed))


# ---------------------------------------------------------------------------
# stages

def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


class Dataset:
    def __init__(self, surfaces, profiles):
        self.surfaces = surfaces
        self.profiles = profiles

    def specimens(self, target):
        return self.profiles if target == "profile" else self.surfaces

    def labels(self, target):
        return np.array([int(s.label) for s in self.specimens(target)], dtype=int)


def dataset_digest(cfg: GeneratorConfig) -> str:
    return canonical_digest({"dataset": asdict(cfg), "generator": 1})[:16]


def generate_stage(config: PipelineConfig, jobs: int = 1) -> Dataset:
    """Write SURF1 files and the profile CSV; reuse them when the dataset digest matches."""
    out = Path(config.output_dir) / "dataset"
    digest = dataset_digest(config.dataset)
    stamp = out / "DIGEST"
    n = config.dataset.count
    paths = [out / "surfaces" / f"surface_{i:03d}.surf" for i in range(n)]
    if stamp.exists() and stamp.read_text().strip() == digest and all(p.exists() for p in paths) \
            and (out / "profiles.csv").exists():
        log.info("reusing dataset %s", digest)
        surfaces = [rio.read_surface(p) for p in paths]
        profiles = rio.read_profiles(out / "profiles.csv")
        return Dataset(surfaces, profiles)
    surfaces = generate_dataset(config.dataset, jobs)
    profiles = extract_all_profiles(surfaces, config.dataset.profiles_per_direction)
    for p, s in zip(paths, surfaces):
        rio.write_surface(p, s)
    rio.write_profiles(out / "profiles.csv", profiles)
    rio.atomic_write_text(stamp, digest + "\n")
    return Dataset(surfaces, profiles)


def _profile_pd(p):
    return sublevel_pd_profile(p)


def _surface_pd(s):
    return sublevel_pd_image(s, max_dim=1)


def compute_diagrams(config: PipelineConfig, data: Dataset, target: str, jobs: int = 1):
    """
    Diagrams per specimen as a list of {dim: PersistenceDiagram}; cached in
    ``cache/<dataset digest>/`` as one npz per target.
    """
    cache = Path(config.output_dir) / "cache" / dataset_digest(config.dataset) / f"diagrams_{target}.npz"
    items = data.specimens(target)
    if cache.exists():
        try:
            return _load_diagrams(cache, len(items))
        except (DataError, KeyError, ValueError, OSError):
            log.warning("ignoring corrupt diagram cache %s", cache)
    fn = _profile_pd if target == "profile" else _surface_pd
    res = _map(fn, items, jobs)
    pds = [{0: r} if target == "profile" else {d.dim: d for d in r} for r in res]
    _save_diagrams(cache, pds)
    return pds


def _save_diagrams(path, pds):
    arrays = {}
    for i, per in enumerate(pds):
        for dim, d in per.items():
            arrays[f"s{i}_d{dim}"] = d.pairs
            arrays[f"s{i}_d{dim}_gmax"] = np.array([d.global_max])
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = _io.BytesIO()
    np.savez(buf, **arrays)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(buf.getvalue())
    tmp.replace(path)


def _load_diagrams(path, n):
    with np.load(path) as z:
        out = []
        for i in range(n):
            per = {}
            for dim in (0, 1):
                key = f"s{i}_d{dim}"
                if key in z:
                    per[dim] = PersistenceDiagram(dim, z[key], float(z[key + "_gmax"][0]))
            if not per:
                raise DataError("incomplete diagram cache")
            out.append(per)
    return out


def _tda_matrix(spec: FeaturizationSpec, pds, y) -> FeatureMatrix:
    blocks, names = [], []
    for dim in spec.homology_dims:
        dgms = [p[dim] for p in pds]
        tag = f"{spec.method}:H{dim}"
        if spec.method == "cc":
            X = np.array([carlsson_coordinates(d).as_array() for d in dgms])
            cols = [f"{tag}:f{k}" for k in range(1, 6)]
        elif spec.method == "pi":
            o = spec.options
            cfg = fit_persistence_image_config(dgms, int(o["grid_cols"]), int(o["grid_rows"]),
                                               float(o["sigma_fraction"]))
            X = np.array([persistence_image(d, cfg).values for d in dgms])
            cols = [f"{tag}:r{r}c{c}" for r in range(cfg.grid_rows) for c in range(cfg.grid_cols)]
        else:
            o = spec.options
            cfg = fit_template_config(dgms, int(o["mesh_a_size"]), int(o["mesh_b_size"]),
                                      float(o["padding"]))
            X = np.array([template_features(d, cfg).values for d in dgms])
            cols = [f"{tag}:a{i}b{j}" for i in range(cfg.mesh_a_size) for j in range(cfg.mesh_b_size)]
        blocks.append(X)
        names.extend(cols)
    return FeatureMatrix(np.hstack(blocks), y, names, spec.feature_id, spec.target)


def _baseline_rows(spec, items, dump_apsd=False):
    """Feature rows of a classical method, plus intermediate arrays for optional dumps."""
    o = spec.options
    dump = []
    if spec.method == "gauss-profile":
        rows = []
        for p in items:
            q = type(p)(p.heights, float(o["spacing_mm"]), p.label, p.parent_index)
            cutoff = select_cutoff(q)
            mean = gaussian_mean_line(q, cutoff).heights
            dump.append(mean)
            rows.append(profile_parameters(RoughnessProfile(q.heights - mean, q.spacing, cutoff)).as_array())
        return np.array(rows), ProfileParams.names(), dump
    if spec.method == "fft-denoise":
        rows = []
        for p in items:
            mean = fft_denoise_mean_line(p, float(o["threshold"])).heights
            dump.append(mean)
            rows.append(profile_parameters(RoughnessProfile(p.heights - mean, p.spacing)).as_array())
        return np.array(rows), ProfileParams.names(), dump
    if spec.method == "fft-peaks":
        pc = _method_objects(spec)
        X = np.array([peak_feature_vector(p, pc).values for p in items])
        names = [f"{s}:{c}{k}" for s in ("fft", "psd") for k in range(1, pc.n_peaks + 1)
                 for c in ("freq", "amp")]
        return X, names, dump
    g2d = _method_objects(spec)
    if spec.method == "gauss2d-areal":
        X = np.array([areal_parameters(roughness_surface(s, g2d)).as_array() for s in items])
        return X, ArealParams.names(), dump
    prefilter = bool(o["prefilter"])
    X = np.array([angular_feature_vector(s, prefilter, g2d).values for s in items])
    if dump_apsd:
        dump = [apsd(roughness_surface(s, g2d) if prefilter else s) for s in items]
    names = [f"angular:peak{k}" for k in range(1, 6)] + ["angular:zeta_c", "angular:zeta_d"]
    return X, names, dump


def featurize_stage(config: PipelineConfig, data: Dataset, jobs: int = 1,
                    dump_mean_lines: bool = False, dump_apsd: bool = False,
                    dump_diagrams: bool = False) -> dict[str, Path]:
    """Compute every distinct feature matrix; returns {feature_id: csv path}."""
    root = Path(config.output_dir)
    outputs = {}
    diagrams = {}
    for spec in config.featurizations:
        fid = spec.feature_id
        if fid in outputs:
            continue
        y = data.labels(spec.target)
        if spec.method in TDA_METHODS:
            if spec.target not in diagrams:
                diagrams[spec.target] = compute_diagrams(config, data, spec.target, jobs)
                if dump_diagrams:
                    for i, per in enumerate(diagrams[spec.target]):
                        rio.write_diagrams(root / "diagrams" / f"{spec.target}_{i:04d}.csv",
                                           [per[k] for k in sorted(per)])
            fm = _tda_matrix(spec, diagrams[spec.target], y)
        else:
            X, names, dump = _baseline_rows(spec, data.specimens(spec.target), dump_apsd)
            fm = FeatureMatrix(X, y, names, fid, spec.target)
            if dump_mean_lines and spec.method in ("gauss-profile", "fft-denoise"):
                src = data.specimens(spec.target)
                rio.write_profiles(root / "mean_lines" / f"{fid}.csv",
                                   [Profile(m, p.spacing, p.label, p.parent_index)
                                    for m, p in zip(dump, src)])
            if dump_apsd and spec.method == "fft2d-angular":
                for s, sp in zip(data.specimens("surface"), dump):
                    rio.write_surface(root / "apsd" / fid / f"apsd_{s.index:03d}.surf",
                                      SurfaceGrid(sp.values, s.hurst, s.index, s.label, 1.0))
        path = root / "features" / f"{fid}.csv"
        rio.write_feature_matrix(path, fm)
        outputs[fid] = path
    return outputs


def _cv_task(args):
    fm, kind, folds, seed, pca_k, run_id = args
    return cross_validate(fm, ClassifierConfig(kind=kind, seed=seed), folds, seed, pca_k,
                          featurization_id=run_id)


def classify_stage(config: PipelineConfig, jobs: int = 1) -> list[CvReport]:
    root = Path(config.output_dir)
    tasks = []
    for spec in config.featurizations:
        path = root / "features" / f"{spec.feature_id}.csv"
        if not path.exists():
            raise DataError(f"missing feature matrix {path}; run 'featurize' first")
        fm = rio.read_feature_matrix(path, spec.feature_id, spec.target)
        pca_k = spec.pca_k if spec.pca_k is not None else config.classify.pca_k
        if pca_k is not None and pca_k > fm.X.shape[1]:
            raise ConfigError(f"pca_k={pca_k} exceeds the {fm.X.shape[1]} features of {spec.run_id}")
        for kind in config.classify.classifiers:
            tasks.append((fm, kind, config.classify.folds, config.classify.seed, pca_k, spec.run_id))
    reports = _map(_cv_task, tasks, jobs)
    for r in reports:
        rio.atomic_write_text(root / "reports" / f"{r.featurization_id}__{r.classifier_id}.json",
                              r.to_json() + "\n")
    rio.atomic_write_text(root / "summary.csv", format_summary(reports))
    return reports


def format_summary(reports) -> str:
    rows = sorted({tuple(r.csv_row()) for r in reports})
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CvReport.CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


@dataclass
class RunManifest:
    config_digest: str
    tool_version: str
    started: str
    finished: str = ""
    outputs: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _now():
    return time.strftime("%Y-%m-%dT%H:%M:%S%z")


def run(config: PipelineConfig, jobs: int = 1, **dump_flags) -> RunManifest:
    root = Path(config.output_dir)
    manifest = RunManifest(config.digest(), __version__, _now())
    data = generate_stage(config, jobs)
    manifest.outputs["dataset"] = str(root / "dataset")
    feats = featurize_stage(config, data, jobs, **dump_flags)
    manifest.outputs["features"] = {k: str(v) for k, v in sorted(feats.items())}
    classify_stage(config, jobs)
    manifest.outputs["reports"] = str(root / "reports")
    manifest.outputs["summary"] = str(root / "summary.csv")
    manifest.finished = _now()
    rio.atomic_write_text(root / "config.yaml", yaml.safe_dump(config.to_dict(), sort_keys=True))
    rio.atomic_write_text(root / "manifest.json", manifest.to_json() + "\n")
    return manifest


def report(run_dirs) -> tuple[str, list[str]]:
    """
    Merge the CvReport JSONs of several runs into one CSV.

    Returns the CSV text and a list of skipped files. Raises DataError when no
    report could be read.
    """
    reports, skipped = [], []
    for d in run_dirs:
        files = sorted((Path(d) / "reports").glob("*.json"))
        if not files:
            skipped.append(f"{d}: no reports")
        for f in files:
            try:
                reports.append(CvReport.from_dict(json.loads(f.read_text(encoding="utf-8"))))
            except (OSError, ValueError, KeyError, TypeError) as exc:
                skipped.append(f"{f}: {exc}")
    if not reports:
        raise DataError("no readable CvReport JSON found")
    return format_summary(reports), skipped
