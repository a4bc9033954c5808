"""
Progress bars for long sweeps
"""

from typing import Iterable, Optional, TypeVar

from tqdm import tqdm

from ..config import get_settings

T = TypeVar("T")


def track(iterable: Iterable[T], desc: str, total: Optional[int] = None) -> Iterable[T]:
    """Wrap an iterable in a stderr progress bar when progress is enabled"""
    return tqdm(iterable, desc=desc, total=total, disable=not get_settings().progress, leave=False)
