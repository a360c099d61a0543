"""Convert a MATLAB ``.mat`` scene (rows x cols x bands) plus ground truth to HSIB.

    python scripts/mat_to_hsib.py Indian_pines.mat indian_pines \
        Indian_pines_gt.mat indian_pines_gt indian_pines.hsib
"""
import argparse

import numpy as np
from scipy.io import loadmat

from ocf_bands.cube import HsiCube, write_cube


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("data_mat")
    ap.add_argument("data_key")
    ap.add_argument("gt_mat")
    ap.add_argument("gt_key")
    ap.add_argument("output")
    args = ap.parse_args()

    img = np.asarray(loadmat(args.data_mat)[args.data_key], dtype=np.float64)
    gt = np.asarray(loadmat(args.gt_mat)[args.gt_key])
    rows, cols, bands = img.shape
    # row-major pixel order, one band per row
    cube = HsiCube(img.reshape(rows * cols, bands).T, rows, cols, labels=gt.reshape(-1))
    write_cube(cube, args.output)
    print(f"{args.output}: {rows}x{cols} pixels, {bands} bands, {len(np.unique(gt)) - 1} classes")


if __name__ == "__main__":
    main()
