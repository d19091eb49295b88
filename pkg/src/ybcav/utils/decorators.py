"""Decorators for functions"""

import logging
import time
from functools import wraps


def timer(
    logger: logging.Logger,
    kind=None,
    level=logging.INFO,
):
    """
    Logs execution time with a message built from the arguments and the result.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.time()
            result = func(*args, **kwargs)
            elapsed = time.time() - start

            if not logger.isEnabledFor(level):
                return result

            if kind == 'steady':
                msg = f"⚖  Steady state with ρ_ee = {result.populations[2]:.4f}"

            elif kind == 'gain':
                msg = f"📈  Gain {result.gain:.4f} vs κ {result.kappa:.4f} rad/µs"

            elif kind == 'threshold':
                msg = f"🎚  Threshold pump power {result:.3f} mW"

            elif kind == 'photons':
                msg = f"💡  Gain-clamped photon number {result.photons:.4g}, pulled {result.shift:+.3f} MHz"

            elif kind == 'integrate':
                msg = f"🌀  Integrated {result.times[-1]:.1f} µs at dt = {result.dt:.2e} µs"

            elif kind == 'map':
                msg = f"🧭  Filled {result.task} map {result.values.shape[0]}×{result.values.shape[1]}"

            elif kind == 'panels':
                msg = f"🗺  Filled {len(result)} panels"

            elif kind == 'export':
                msg = f"💾  Exported {', '.join(str(p) for p in result)}"

            elif kind == 'svg':
                msg = f"🎨  Rendered heatmap ({len(result)} bytes)"

            else:
                msg = f"  Executed {func.__name__}"

            logger.log(
                level,
                f"{msg:<75} ⏱ {elapsed:.4f} s",
            )
            return result

        return wrapper

    return decorator
