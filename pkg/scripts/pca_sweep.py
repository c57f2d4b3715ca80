"""
Accuracy of profile persistence-image features as a function of the number of
principal components kept (PCA fit per training fold).

    python scripts/pca_sweep.py --components 2 5 10 20 40
"""

import argparse

import numpy as np

from roughtda.classify import ClassifierConfig, FeatureMatrix, cross_validate
from roughtda.persistence import sublevel_pd_profile
from roughtda.surface_synth import GeneratorConfig, extract_all_profiles, generate_dataset
from roughtda.tda_features import fit_persistence_image_config, persistence_image


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--components", type=int, nargs="+", default=[2, 5, 10, 20, 40])
    ap.add_argument("--classifier", choices=["logreg", "rforest"], default="logreg")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    surfaces = generate_dataset(GeneratorConfig(seed=args.seed))
    profiles = extract_all_profiles(surfaces)
    pds = [sublevel_pd_profile(p) for p in profiles]
    cfg = fit_persistence_image_config(pds)
    X = np.array([persistence_image(d, cfg).values for d in pds])
    y = np.array([int(p.label) for p in profiles])
    fm = FeatureMatrix(X, y, [f"pi:{i}" for i in range(X.shape[1])], "profile-pi-H0")
    clf = ClassifierConfig(args.classifier, seed=args.seed)

    for k in [None, *args.components]:
        rep = cross_validate(fm, clf, k=10, seed=args.seed, pca_k=k)
        print(f"{'all' if k is None else k:>5} components: {rep.mean:.3f} +- {rep.std:.3f}")


if __name__ == "__main__":
    main()
