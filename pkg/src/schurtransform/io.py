"""Reading variable files and writing result documents.

Input files hold one variable each: N rows of k coordinates separated by
whitespace or commas, with blank lines and ``#`` comments skipped.  A
manifest lists one file per line with an optional tab-separated label;
paths are resolved relative to the manifest.

Three output formats exist: ``table`` (fixed width, human readable),
``struct`` (JSON, round-trips exactly), and ``plot-csv`` (one row per
partition and subset, ready for plotting).  Human-readable numbers are
printed with 12 significant digits; struct keeps full precision so a
parsed document equals the written one.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import math
import os

import numpy as np

from .exceptions import DataError
from .statistics import DataSeries
from .transform import ClassificationResult, SchurContent, SchurResult

_NUM = "{:.12g}"


def partition_str(partition) -> str:
    return "(" + ",".join(str(p) for p in partition) + ")"


def parse_partition(text) -> tuple[int, ...]:
    inner = text.strip()
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    try:
        return tuple(int(p) for p in inner.split(",") if p != "")
    except ValueError:
        raise ValueError(f"not a partition string: {text!r}") from None


def read_points_file(path) -> np.ndarray:
    """One variable: an (N, k) array parsed strictly, errors located by row."""
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            values = []
            for tok in tokens:
                try:
                    value = float(tok)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: not a number: {tok!r}") from None
                if not math.isfinite(value):
                    raise DataError(f"{path}:{lineno}: non-finite value: {tok!r}")
                values.append(value)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DataError(
                    f"{path}:{lineno}: row has {len(values)} columns, expected {width}"
                )
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def read_manifest(path) -> list[tuple[str, str | None]]:
    """(path, label) pairs; paths are resolved relative to the manifest."""
    base = os.path.dirname(os.path.abspath(path))
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].rstrip("\n")
            if not line.strip():
                continue
            if "\t" in line:
                file_part, label = line.split("\t", 1)
                file_part, label = file_part.strip(), label.strip()
                if not label:
                    label = None
            else:
                file_part, label = line.strip(), None
            if not file_part:
                raise DataError(f"{path}:{lineno}: missing file path")
            out.append((os.path.join(base, file_part), label))
    if not out:
        raise DataError(f"{path}: empty manifest")
    return out


def read_series(paths, labels=None) -> DataSeries:
    """Assemble a series from per-variable files, one variable per file.

    ``paths`` is a list of files or a single manifest path.  Every file
    must agree on N and k; mismatches are reported with the file name.
    """
    if isinstance(paths, (str, os.PathLike)):
        entries = read_manifest(paths)
    else:
        entries = [(str(p), None) for p in paths]
    if labels is not None:
        if len(labels) != len(entries):
            raise ValueError(f"{len(labels)} labels for {len(entries)} files")
        entries = [(p, str(l)) for (p, _), l in zip(entries, labels)]
    arrays = []
    names = []
    for path, label in entries:
        arr = read_points_file(path)
        if arrays and arr.shape != arrays[0].shape:
            raise DataError(
                f"{path}: shape {arr.shape} does not match "
                f"{names[0]} with shape {arrays[0].shape}"
            )
        arrays.append(arr)
        stem = os.path.splitext(os.path.basename(path))[0]
        names.append(label if label is not None else stem)
    return DataSeries(np.stack(arrays, axis=1), labels=tuple(names))


def read_references(path, length, dim) -> np.ndarray:
    """Reference points, one row per variable."""
    refs = read_points_file(path)
    if refs.shape != (length, dim):
        raise DataError(
            f"{path}: reference points have shape {refs.shape}, "
            f"expected ({length}, {dim})"
        )
    return refs


# --- result documents ---------------------------------------------------------

def transform_document(result, source=None) -> dict:
    doc = {
        "kind": "schur-transform",
        "factor_count": result.order,
        "dim": result.dim,
        "sample_count": result.sample_count,
        "normalized": result.normalized,
        "partitions": [partition_str(lam) for lam in result.partitions],
        "amplitudes": {partition_str(lam): result.amplitudes[lam] for lam in result.partitions},
        "residual": result.residual,
        "tensor_norm": result.tensor_norm,
    }
    if source is not None:
        doc["source"] = source
    return doc


def content_document(content, source=None) -> dict:
    doc = {
        "kind": "schur-content",
        "factor_count": content.factor_count,
        "variable_count": content.variable_count,
        "dim": content.dim,
        "mode": content.mode,
        "sample_count": content.sample_count,
        "normalized": content.normalized,
        "partitions": [partition_str(lam) for lam in content.partitions],
        "subsets": [
            {"id": i, "members": list(content.member_labels[i])}
            for i in range(len(content.subsets))
        ],
        "amplitudes": {
            partition_str(lam): [float(v) for v in content.amplitudes[:, p]]
            for p, lam in enumerate(content.partitions)
        },
    }
    if source is not None:
        doc["source"] = source
    return doc


def classification_document(result, source=None) -> dict:
    doc = {
        "kind": "classification",
        "label": result.label,
        "metric": result.metric,
        "tie": result.tie,
        "classes": list(result.class_labels),
        "partitions": [partition_str(lam) for lam in result.partitions],
        "scores": {
            label: {m: result.scores[label][m] for m in ("l1", "l2")}
            for label in result.class_labels
        },
    }
    if source is not None:
        doc["source"] = source
    return doc


def document_for(obj, source=None) -> dict:
    if isinstance(obj, SchurResult):
        return transform_document(obj, source)
    if isinstance(obj, SchurContent):
        return content_document(obj, source)
    if isinstance(obj, ClassificationResult):
        return classification_document(obj, source)
    raise TypeError(f"no document form for {type(obj).__name__}")


def render_struct(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def parse_struct(text) -> dict:
    return json.loads(text)


def render_table(obj) -> str:
    if isinstance(obj, SchurResult):
        lines = [
            f"schur transform: {obj.order} factors over R^{obj.dim}, "
            f"{obj.sample_count} samples"
            + (", normalized" if obj.normalized else ""),
            f"{'partition':<14} amplitude",
        ]
        for lam in obj.partitions:
            lines.append(
                f"{partition_str(lam):<14} " + _NUM.format(obj.amplitudes[lam])
            )
        lines.append("residual       " + _NUM.format(obj.residual))
        return "\n".join(lines) + "\n"
    if isinstance(obj, SchurContent):
        lines = [
            f"schur content: {obj.factor_count}-factor subsets of "
            f"{obj.variable_count} variables ({obj.mode}), "
            f"{obj.sample_count} samples over R^{obj.dim}"
            + (", normalized" if obj.normalized else ""),
            f"{'subset':<8}{'members':<28}"
            + "".join(f"{partition_str(lam):>16}" for lam in obj.partitions),
        ]
        for i in range(len(obj.subsets)):
            members = "+".join(obj.member_labels[i])
            row = "".join(
                f"{_NUM.format(v):>16}" for v in obj.amplitudes[i]
            )
            lines.append(f"{i:<8}{members:<28}{row}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, ClassificationResult):
        lines = [
            f"assigned class: {obj.label} (metric {obj.metric})"
            + (" [tie, broke toward earliest class]" if obj.tie else ""),
            f"{'class':<16}{'l1':>18}{'l2':>18}",
        ]
        for label in obj.class_labels:
            lines.append(
                f"{label:<16}"
                + f"{_NUM.format(obj.scores[label]['l1']):>18}"
                + f"{_NUM.format(obj.scores[label]['l2']):>18}"
            )
        return "\n".join(lines) + "\n"
    raise TypeError(f"no table form for {type(obj).__name__}")


def render_plot_csv(obj) -> str:
    """One row per (partition, subset): partition, subset id, members, amplitude."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["partition", "subset", "members", "amplitude"])
    if isinstance(obj, SchurResult):
        members = "all"
        for lam in obj.partitions:
            writer.writerow(
                [partition_str(lam), 0, members, _NUM.format(obj.amplitudes[lam])]
            )
        return buf.getvalue()
    if isinstance(obj, SchurContent):
        for p, lam in enumerate(obj.partitions):
            for i in range(len(obj.subsets)):
                writer.writerow(
                    [
                        partition_str(lam),
                        i,
                        "+".join(obj.member_labels[i]),
                        _NUM.format(obj.amplitudes[i, p]),
                    ]
                )
        return buf.getvalue()
    raise TypeError(f"no plot-csv form for {type(obj).__name__}")


def write_result(obj, format="table", out=None, source=None) -> str:
    """Render a result and write it to ``out`` (or return it for stdout).

    Formats: ``table``, ``struct`` (JSON), ``plot-csv``.
    """
    if format == "table":
        text = render_table(obj)
    elif format == "struct":
        text = render_struct(document_for(obj, source))
    elif format == "plot-csv":
        text = render_plot_csv(obj)
    else:
        raise ValueError(f"unknown format {format!r}")
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
