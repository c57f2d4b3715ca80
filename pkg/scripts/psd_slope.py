"""
Check the generator's spectrum: fit the log-log slope of the radially averaged
power spectrum for several Hurst exponents and compare with -2(H+1).

    python scripts/psd_slope.py --size 256 --seeds 10
"""

import argparse

import numpy as np

from roughtda.surface_synth import generate_surface


def radial_slope(h, lo=0.05, hi=0.25, bins=24):
    n = h.shape[0]
    P = np.abs(np.fft.fft2(h)).ravel() ** 2
    q = np.hypot(*np.meshgrid(np.fft.fftfreq(n), np.fft.fftfreq(n), indexing="ij")).ravel()
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.digitize(q, edges)
    qs = [q[idx == k].mean() for k in range(1, bins + 1)]
    ps = [P[idx == k].mean() for k in range(1, bins + 1)]
    return np.polyfit(np.log(qs), np.log(ps), 1)[0]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--hurst", type=float, nargs="+", default=[0.0, 0.25, 0.5, 0.75, 1.0])
    args = ap.parse_args()

    print(f"{'H':>5} {'expected':>9} {'mean':>8} {'std':>7}")
    for H in args.hurst:
        s = [radial_slope(generate_surface(H, args.size, k).heights) for k in range(args.seeds)]
        print(f"{H:5.2f} {-2 * (H + 1):9.2f} {np.mean(s):8.3f} {np.std(s):7.3f}")


if __name__ == "__main__":
    main()
