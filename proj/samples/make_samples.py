"""Writes the sample BSGF/BSGM inputs used by the sample configs."""
import math
import struct
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
TWO_PI = 2.0 * math.pi


def write_grid(path, sizes, periods, values, p=(2, 1)):
    # values: complex array shaped (points, d), last axis fastest.
    values = np.asarray(values, dtype=np.complex128)
    head = b"BSGF" + struct.pack("<II", 1, len(sizes))
    head += struct.pack(f"<{len(sizes)}I", *sizes) + struct.pack(f"<{len(periods)}d", *periods)
    head += struct.pack("<III", values.shape[1], *p)
    path.write_bytes(head + values.astype("<c16").tobytes())


def write_matrix(path, m):
    m = np.asarray(m, dtype=np.complex128)
    head = b"BSGF" + struct.pack("<III", 1, 1, 1) + struct.pack("<d", 1.0)
    head += struct.pack("<III", m.size, 2, 1)
    path.write_bytes(head + m.astype("<c16").tobytes())


def line(n, period=TWO_PI):
    return np.arange(n) * period / n


x64 = line(64)
f = sum(np.exp(1j * (k * x64 + k)) / k**2 for k in range(1, 11))
write_grid(HERE / "line64.bsgf", [64], [TWO_PI], f[:, None])

x32 = line(32)
chan = np.stack([np.cos(x32) + 0.5j * np.sin(2 * x32), np.sin(3 * x32), 0.25 * np.cos(5 * x32 + 1)], axis=1)
write_grid(HERE / "channels32.bsgf", [32], [TWO_PI], chan)

x64w = line(64)
w = 0.05 + np.abs(x64w - math.pi) ** 0.5
write_grid(HERE / "sqrt_weight64.bsgf", [64], [TWO_PI], w[:, None])

write_matrix(HERE / "drift3.bsgm", [[0.2, 0.05, 0.0], [0.0, 0.1, 0.05j], [0.02, 0.0, 0.1]])

diag = np.stack([2.0**m * (1.0 + 0.1 * np.cos(x32)) for m in range(4)], axis=1)
write_grid(HERE / "system_diag32.bsgf", [32], [TWO_PI], diag)
