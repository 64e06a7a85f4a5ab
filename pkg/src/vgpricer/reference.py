"""Built-in reference data for the SPY ETF replication.

TABLE1_PARAMS holds the daily VG parameter fit (returns in percent per
trading day) together with the market context of the published European
call benchmark: spot 438.98, risk-free rate 6%, Black-Scholes benchmark
volatility 0.1848.

CALL_TABLE holds the published call-price table on the 31 x 6 moneyness /
maturity lattice: for each strike, the Black-Scholes benchmark price, the
VG price by 12-point Newton-Cotes quadrature, and the VG price by
fractional FFT, at each maturity.  The BSM column is reproducible from the
benchmark volatility and is used as an oracle; the two VG columns depend on
a tilt parameter whose derivation is not reproducible from the published
formulas, so they serve only for side-by-side deviation reports.
"""

from __future__ import annotations

import numpy as np

from .model import VGParams

__all__ = [
    "TABLE1_PARAMS",
    "SPOT",
    "RATE",
    "BS_VOL",
    "MATURITIES",
    "MONEYNESS",
    "STRIKES",
    "bsm_reference",
    "vg_nc_reference",
    "vg_frft_reference",
]

TABLE1_PARAMS = VGParams(mu=0.0848, delta=-0.0577, sigma=1.0295, alpha=0.8845, theta=0.9378)
SPOT = 438.98
RATE = 0.06
BS_VOL = 0.1848

MATURITIES = (0.0625, 0.125, 0.25, 0.5, 0.75, 1.0)

# Each row: strike, moneyness, then (BSM, VG_NC, VG_FRFT) per maturity.
_ROWS = [
    (219.49, 2.00, 220.31, 220.28, 219.86, 221.13, 221.10, 220.48, 222.76, 222.72, 221.71,
     225.98, 225.93, 224.14, 229.15, 229.13, 226.53, 232.27, 232.26, 228.88),
    (225.12, 1.95, 214.70, 214.74, 214.10, 215.54, 215.58, 214.74, 217.21, 217.25, 216.01,
     220.52, 220.54, 218.53, 223.77, 223.82, 221.01, 226.97, 227.04, 223.45),
    (231.04, 1.90, 208.80, 208.83, 208.18, 209.66, 209.69, 208.84, 211.38, 211.41, 210.16,
     214.77, 214.80, 212.77, 218.10, 218.16, 215.34, 221.39, 221.47, 217.88),
    (237.29, 1.85, 202.58, 202.53, 202.10, 203.47, 203.42, 202.79, 205.23, 205.18, 204.16,
     208.71, 208.67, 206.86, 212.13, 212.13, 209.53, 215.51, 215.53, 212.16),
    (243.88, 1.80, 196.02, 196.06, 195.38, 196.92, 196.97, 196.10, 198.73, 198.78, 197.51,
     202.31, 202.37, 200.32, 205.83, 205.93, 203.10, 209.31, 209.43, 205.84),
    (250.85, 1.75, 189.07, 189.16, 188.47, 190.01, 190.10, 189.21, 191.87, 191.96, 190.68,
     195.55, 195.66, 193.61, 199.17, 199.33, 196.50, 202.75, 202.94, 199.36),
    (258.22, 1.70, 181.72, 181.81, 181.36, 182.69, 182.78, 182.13, 184.60, 184.69, 183.66,
     188.39, 188.52, 186.70, 192.12, 192.30, 189.71, 195.81, 196.03, 192.70),
    (266.05, 1.65, 173.93, 173.98, 173.53, 174.92, 174.97, 174.33, 176.89, 176.95, 175.92,
     180.79, 180.91, 179.09, 184.64, 184.83, 182.24, 188.45, 188.69, 185.37),
    (274.36, 1.60, 165.64, 165.64, 165.45, 166.67, 166.66, 166.28, 168.70, 168.70, 167.94,
     172.73, 172.82, 171.26, 176.70, 176.87, 174.56, 180.63, 180.88, 177.84),
    (283.21, 1.55, 156.83, 156.75, 156.56, 157.88, 157.81, 157.43, 159.98, 159.91, 159.18,
     164.14, 164.21, 162.66, 168.25, 168.42, 166.14, 172.33, 172.59, 169.60),
    (292.65, 1.50, 147.42, 147.28, 146.81, 148.51, 148.38, 147.73, 150.68, 150.56, 149.56,
     154.98, 155.05, 153.24, 159.24, 159.45, 156.93, 163.49, 163.79, 160.59),
    (302.75, 1.45, 137.37, 137.50, 136.72, 138.50, 138.63, 137.69, 140.74, 140.89, 139.62,
     145.20, 145.61, 143.53, 149.64, 150.21, 147.45, 154.08, 154.76, 151.34),
    (313.56, 1.40, 126.60, 126.45, 126.29, 127.77, 127.64, 127.31, 130.09, 129.99, 129.36,
     134.73, 135.00, 133.53, 139.39, 139.85, 137.71, 144.06, 144.63, 141.86),
    (325.17, 1.35, 115.03, 115.01, 114.85, 116.24, 116.25, 115.94, 118.65, 118.71, 118.15,
     123.51, 124.07, 122.64, 128.44, 129.20, 127.14, 133.40, 134.25, 131.59),
    (337.68, 1.30, 102.57, 102.48, 102.35, 103.83, 103.80, 103.53, 106.34, 106.39, 105.94,
     111.50, 112.20, 110.84, 116.79, 117.68, 115.72, 122.10, 123.05, 120.53),
    (351.18, 1.25, 89.11, 89.15, 88.69, 90.42, 90.55, 90.00, 93.08, 93.33, 92.69,
     98.68, 99.71, 98.12, 104.44, 105.61, 103.48, 110.16, 111.34, 108.71),
    (365.82, 1.20, 74.53, 74.60, 74.52, 75.91, 76.15, 76.02, 78.82, 79.18, 79.08,
     85.10, 86.32, 85.17, 91.45, 92.73, 91.09, 97.65, 98.88, 96.78),
    (381.72, 1.15, 58.69, 59.15, 58.38, 60.22, 60.94, 60.20, 63.67, 64.34, 63.82,
     70.94, 72.47, 70.85, 77.99, 79.48, 77.46, 84.70, 86.09, 83.68),
    (399.07, 1.10, 41.51, 42.09, 41.76, 43.56, 44.29, 44.08, 48.03, 48.30, 48.53,
     56.55, 57.74, 56.68, 64.32, 65.45, 64.03, 71.52, 72.55, 70.80),
    (418.08, 1.05, 23.73, 24.37, 24.15, 27.03, 27.33, 27.36, 32.83, 32.25, 33.00,
     42.51, 43.25, 42.47, 50.85, 51.63, 50.57, 58.42, 59.16, 57.83),
    (438.98, 1.00, 8.92, 6.45, 6.76, 13.11, 11.13, 11.40, 19.53, 18.35, 18.43,
     29.61, 29.17, 29.01, 38.11, 38.01, 37.61, 45.79, 45.79, 45.20),
    (462.08, 0.95, 1.64, 1.19, 1.27, 4.40, 2.94, 3.02, 9.62, 7.41, 7.50,
     18.70, 17.17, 17.09, 26.72, 25.85, 25.50, 34.12, 33.67, 33.01),
    (487.76, 0.90, 0.10, 0.35, 0.40, 0.89, 0.96, 1.02, 3.68, 2.82, 2.94,
     10.42, 8.69, 8.83, 17.24, 15.73, 15.71, 23.87, 22.75, 22.48),
    (516.45, 0.85, 0.00, 0.10, 0.13, 0.09, 0.31, 0.34, 1.02, 1.03, 1.11,
     4.96, 3.92, 4.09, 10.02, 8.48, 8.63, 15.46, 13.90, 13.93),
    (548.73, 0.80, 0.00, 0.03, 0.04, 0.00, 0.10, 0.12, 0.19, 0.37, 0.41,
     1.94, 1.66, 1.78, 5.12, 4.19, 4.37, 9.10, 7.80, 7.96),
    (585.31, 0.75, 0.00, 0.01, 0.01, 0.00, 0.03, 0.04, 0.02, 0.12, 0.14,
     0.60, 0.64, 0.72, 2.23, 1.85, 2.02, 4.76, 3.91, 4.14),
    (627.11, 0.70, 0.00, 0.00, 0.00, 0.00, 0.01, 0.01, 0.00, 0.04, 0.04,
     0.14, 0.23, 0.26, 0.80, 0.75, 0.83, 2.15, 1.77, 1.91),
    (675.35, 0.65, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.01,
     0.02, 0.07, 0.09, 0.22, 0.27, 0.31, 0.81, 0.72, 0.81),
    (731.63, 0.60, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00,
     0.00, 0.02, 0.03, 0.05, 0.09, 0.11, 0.24, 0.26, 0.31),
    (798.15, 0.55, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00,
     0.00, 0.01, 0.01, 0.01, 0.02, 0.03, 0.06, 0.08, 0.10),
    (877.96, 0.50, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00,
     0.00, 0.00, 0.00, 0.00, 0.01, 0.01, 0.01, 0.02, 0.03),
]

MONEYNESS = np.array([r[1] for r in _ROWS])
STRIKES = np.array([r[0] for r in _ROWS])
_DATA = np.array([r[2:] for r in _ROWS]).reshape(len(_ROWS), len(MATURITIES), 3)


def bsm_reference() -> np.ndarray:
    """Published Black-Scholes benchmark prices, shape (31, 6)."""
    return _DATA[:, :, 0].copy()


def vg_nc_reference() -> np.ndarray:
    """Published VG prices (Newton-Cotes route), shape (31, 6)."""
    return _DATA[:, :, 1].copy()


def vg_frft_reference() -> np.ndarray:
    """Published VG prices (fractional-FFT route), shape (31, 6)."""
    return _DATA[:, :, 2].copy()
