"""Synthetic daily signals with known topology, for validation."""
from __future__ import annotations

from datetime import date

import numpy as np

from .errors import ConfigError
from .ingest import TimeSeries

DEFAULT_START = date(2000, 1, 1)


def sine(length: int, period: float, amplitude: float = 1.0, phase: float = 0.0,
         offset: float = 0.0) -> np.ndarray:
    if length < 1 or period <= 0:
        raise ConfigError("sine needs length >= 1 and period > 0")
    t = np.arange(length)
    return offset + amplitude * np.sin(2 * np.pi * t / period + phase)


def noisy_sine(length: int, period: float, amplitude: float = 1.0, phase: float = 0.0,
               noise_sd: float = 0.1, seed: int = 0) -> np.ndarray:
    if noise_sd < 0:
        raise ConfigError("noise_sd must be non-negative")
    rng = np.random.default_rng(seed)
    return sine(length, period, amplitude, phase) + noise_sd * rng.standard_normal(length)


def modulated_sine(length: int = 120, period: float = 20.0, boost: float = 3.0,
                   boost_start: int = 40, boost_end: int = 80) -> tuple[np.ndarray, np.ndarray]:
    """Sine whose amplitude is multiplied by ``boost`` on days
    ``boost_start <= t < boost_end``.  Returns ``(signal, envelope)``."""
    envelope = np.ones(length)
    envelope[boost_start:boost_end] = boost
    return envelope * sine(length, period), envelope


def tone_switch(length: int = 120, switch: int = 60, periods: tuple[float, float] = (10.0, 25.0),
                amplitudes: tuple[float, float] = (1.0, 0.5)) -> np.ndarray:
    """Two superposed tones up to day ``switch``, only the first afterwards."""
    first = sine(length, periods[0], amplitudes[0])
    second = sine(length, periods[1], amplitudes[1])
    second[switch:] = 0.0
    return first + second


def _lorenz_rhs(state: np.ndarray, sigma: float, rho: float, beta: float) -> np.ndarray:
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def lorenz63(length: int, dt: float = 0.01, sigma: float = 10.0, rho: float = 28.0,
             beta: float = 8.0 / 3.0, initial=(1.0, 1.0, 1.0), seed: int | None = None,
             warmup: int = 1000, sample_every: int = 1) -> np.ndarray:
    """x-coordinate of a fixed-step RK4 integration of the Lorenz-63 system.

    ``seed`` jitters the initial condition by N(0, 1) so that different seeds
    land on different trajectories of the attractor.
    """
    if length < 1 or dt <= 0 or warmup < 0 or sample_every < 1:
        raise ConfigError("lorenz63 needs length >= 1, dt > 0, warmup >= 0, sample_every >= 1")
    state = np.array(initial, dtype=float)
    if state.shape != (3,):
        raise ConfigError("initial condition must have three components")
    if seed is not None:
        state = state + np.random.default_rng(seed).standard_normal(3)

    def step(s):
        k1 = _lorenz_rhs(s, sigma, rho, beta)
        k2 = _lorenz_rhs(s + 0.5 * dt * k1, sigma, rho, beta)
        k3 = _lorenz_rhs(s + 0.5 * dt * k2, sigma, rho, beta)
        k4 = _lorenz_rhs(s + dt * k3, sigma, rho, beta)
        return s + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    for _ in range(warmup):
        state = step(state)
    out = np.empty(length)
    for i in range(length):
        out[i] = state[0]
        for _ in range(sample_every):
            state = step(state)
    return out


KINDS = ("sine", "noisy_sine", "lorenz63", "modulated_sine", "tone_switch")


def synth_signal(kind: str, start: date = DEFAULT_START, label: str | None = None,
                 **params) -> TimeSeries:
    """Daily :class:`TimeSeries` of one of the synthetic ``KINDS``."""
    makers = {
        "sine": sine,
        "noisy_sine": noisy_sine,
        "lorenz63": lorenz63,
        "modulated_sine": lambda **kw: modulated_sine(**kw)[0],
        "tone_switch": tone_switch,
    }
    if kind not in makers:
        raise ConfigError(f"unknown signal kind {kind!r}; choose from {', '.join(KINDS)}")
    try:
        values = makers[kind](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind}: {exc}") from None
    return TimeSeries.from_values(values, start, "daily", label or kind)
