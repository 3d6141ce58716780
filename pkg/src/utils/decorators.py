import functools
import time
from typing import Any, Callable

from src.config.logger import get_logger
from src.utils.log_sanitizer import sanitize_log_input

logger = get_logger(__name__)


def _summarize(value: Any) -> str:
    shape = getattr(value, "shape", None)
    if shape is not None:
        return f"<{type(value).__name__} shape={tuple(shape)}>"
    return sanitize_log_input(value, max_length=200)


def log_io(func: Callable) -> Callable:
    """
    A decorator that logs the parameters, a short summary of the result and the
    elapsed wall time of a (typically expensive) numerical routine.

    Args:
        func: The function to be decorated

    Returns:
        The wrapped function with input/output logging
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        func_name = func.__name__
        params = ", ".join(
            [*(_summarize(arg) for arg in args), *(f"{k}={_summarize(v)}" for k, v in kwargs.items())]
        )
        logger.debug(f"{func_name} called with parameters: {params}")

        t0 = time.perf_counter()
        result = func(*args, **kwargs)
        dt = (time.perf_counter() - t0) * 1000

        logger.info(f"{func_name} finished in {dt:.1f} ms")
        logger.debug(f"{func_name} returned: {_summarize(result)}")
        return result

    return wrapper
