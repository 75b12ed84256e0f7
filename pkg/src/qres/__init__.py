"""Shared singlets, shared reference frames and refbits compared on small
estimation and discrimination tasks."""

from .angular import HALF, SpinJ
from .tasks import Resource, TaskResult

__version__ = "0.1.0"
