"""Bundled datasets.

Fisher's iris measurements ship with the package (the classic
150-observation version with the two historically miscopied rows
corrected), so the reproduction reports never touch the network.  The
loader verifies a recorded checksum."""

from __future__ import annotations

import csv
import hashlib
from importlib import resources

import numpy as np

from .errors import GinicorrError

IRIS_SHA256 = "9cc1c345c71bcc9b486b74cbf6063fa66f4bb5e0f603a4b3c3471ec2e5e8e355"

IRIS_VARIABLES = ("sepal_length", "sepal_width", "petal_length", "petal_width")
IRIS_SPECIES = ("setosa", "versicolor", "virginica")

IRIS_PAIRS = (
    ("sepal_length", "sepal_width"),
    ("sepal_length", "petal_length"),
    ("sepal_length", "petal_width"),
    ("sepal_width", "petal_length"),
    ("sepal_width", "petal_width"),
    ("petal_length", "petal_width"),
)


def load_iris():
    """Return (data, species): a (150, 4) float array in the column order
    of IRIS_VARIABLES, and the species label per row."""
    text = resources.files("ginicorr.data").joinpath("iris.csv").read_text()
    digest = hashlib.sha256(text.encode()).hexdigest()
    if digest != IRIS_SHA256:
        raise GinicorrError(f"bundled iris.csv checksum mismatch: {digest}")
    reader = csv.DictReader(text.splitlines())
    rows = []
    labels = []
    for rec in reader:
        rows.append([float(rec[v]) for v in IRIS_VARIABLES])
        labels.append(rec["species"])
    data = np.array(rows)
    data.setflags(write=False)
    return data, tuple(labels)


def iris_columns(species: str = "all"):
    """Columns of the iris data restricted to one species (or all)."""
    data, labels = load_iris()
    if species != "all":
        if species not in IRIS_SPECIES:
            raise GinicorrError(f"unknown species {species!r}")
        mask = np.array([s == species for s in labels])
        data = data[mask]
    return {name: np.ascontiguousarray(data[:, j]) for j, name in enumerate(IRIS_VARIABLES)}
