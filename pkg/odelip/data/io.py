"""Dataset CSV and metadata sidecar"""

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from odelip.core.dataset import Dataset, NoiseSpec, Provenance, SampleSet

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def sidecar_path(csv_path: PathLike) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.json")


def dataset_columns(dim: int) -> list:
    return ["t"] + [f"x{k + 1}" for k in range(dim)] + [f"y{k + 1}" for k in range(dim)] + ["split"]


def dataset_metadata(dataset: Dataset) -> dict:
    prov = dataset.provenance
    return {
        "system_id": prov.system_id,
        "dim": dataset.dim,
        "noise_level": dataset.noise.level,
        "noise_seed": dataset.noise.seed,
        "noise_param_is_variance": dataset.noise.param_is_variance,
        "ic_seed": prov.ic_seed,
        "split_seed": prov.split_seed,
        "dt": prov.dt,
        "K": prov.n_ic,
        "M": prov.n_times,
        "smoothing_order": prov.smoothing_order,
        "substeps": prov.substeps,
        "extension_depth": prov.extension_depth,
        "train_fraction": prov.train_fraction,
        "n_train": len(dataset.train),
        "n_test": len(dataset.test),
    }


def write_dataset(dataset: Dataset, path: PathLike) -> Path:
    """
    Write train rows then test rows (each in shuffled order) plus the sidecar
    
    Returns:
        Path of the CSV file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    
    blocks = []
    for name, block in (("train", dataset.train), ("test", dataset.test)):
        frame = pd.DataFrame(
            np.hstack([block.inputs, block.targets]),
            columns=dataset_columns(dataset.dim)[:-1],
        )
        frame["split"] = name
        blocks.append(frame)
    pd.concat(blocks, ignore_index=True).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    
    with open(sidecar_path(path), "w") as f:
        json.dump(dataset_metadata(dataset), f, indent=2, sort_keys=True)
    
    logger.info(f"Dataset exported to {path}")
    return path


def read_dataset(path: PathLike) -> Dataset:
    """Load a dataset written by write_dataset"""
    path = Path(path)
    with open(sidecar_path(path)) as f:
        meta = json.load(f)
    frame = pd.read_csv(path, float_precision="round_trip")
    
    dim = int(meta["dim"])
    x_cols = ["t"] + [f"x{k + 1}" for k in range(dim)]
    y_cols = [f"y{k + 1}" for k in range(dim)]
    
    def block(name: str) -> SampleSet:
        rows = frame[frame["split"] == name]
        return SampleSet(inputs=rows[x_cols].to_numpy(np.float64), targets=rows[y_cols].to_numpy(np.float64))
    
    return Dataset(
        train=block("train"),
        test=block("test"),
        dim=dim,
        noise=NoiseSpec(
            level=float(meta["noise_level"]),
            seed=int(meta["noise_seed"]),
            param_is_variance=bool(meta["noise_param_is_variance"]),
        ),
        provenance=Provenance(
            system_id=meta["system_id"],
            ic_seed=int(meta["ic_seed"]),
            split_seed=int(meta["split_seed"]),
            dt=float(meta["dt"]),
            n_ic=int(meta["K"]),
            n_times=int(meta["M"]),
            smoothing_order=meta["smoothing_order"],
            substeps=int(meta["substeps"]),
            extension_depth=int(meta["extension_depth"]),
            train_fraction=float(meta["train_fraction"]),
        ),
    )
