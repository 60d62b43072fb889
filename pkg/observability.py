"""
Observability module for logging and property-suite metrics.

Features:
- Structured JSON logging with python-json-logger
- Per-trial metrics for the self-check suites
- Performance timing for expensive entry points
"""
import logging
import os
import threading
import time
from typing import Dict, Any, Optional, Callable, List
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import wraps
from contextlib import contextmanager

from pythonjsonlogger import jsonlogger


@dataclass
class TrialMetrics:
    """Metrics for a single property-suite trial."""
    suite: str
    index: int
    latency_ms: float = 0.0
    success: bool = True
    error_message: Optional[str] = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for logging."""
        return {
            "suite": self.suite,
            "index": self.index,
            "latency_ms": round(self.latency_ms, 2),
            "success": self.success,
            "error_message": self.error_message,
            "timestamp": self.timestamp,
        }


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """JSON formatter with source and service fields."""

    service_name = "cyclic-symbols"

    def add_fields(self, log_record: Dict[str, Any], record: logging.LogRecord, message_dict: Dict[str, Any]) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record['timestamp'] = datetime.now(timezone.utc).isoformat()
        log_record['level'] = record.levelname

        log_record['logger'] = record.name
        log_record['module'] = record.module
        log_record['function'] = record.funcName
        log_record['line'] = record.lineno

        log_record['service'] = self.service_name
        log_record['environment'] = os.getenv('CYCLIC_APP_ENV', 'development')


def setup_structured_logging(
    level: int = logging.WARNING,
    enable_json: bool = False,
    service_name: str = "cyclic-symbols"
) -> logging.Logger:
    """
    Configure the root logger.

    Args:
        level: Logging level
        enable_json: Whether to use JSON format
        service_name: Value of the service field in JSON records

    Returns:
        Configured root logger
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers = []

    if enable_json:
        formatter = CustomJsonFormatter(
            '%(timestamp)s %(level)s %(name)s %(message)s',
            json_ensure_ascii=False
        )
        formatter.service_name = service_name
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    # stderr so stdout stays reserved for command payloads
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)
    return root_logger


class CheckTracker:
    """
    Records the outcome of every property trial.

    Usage:
        tracker = CheckTracker()

        with tracker.track_trial("witt-ring", 7):
            run_trial(7)

        print(tracker.get_summary())
    """

    def __init__(self):
        self.trials: List[TrialMetrics] = []
        self.logger = logging.getLogger(__name__)
        self._lock = threading.Lock()

    @contextmanager
    def track_trial(self, suite: str, index: int):
        """
        Context manager to time one trial.

        Failures are recorded and swallowed; the summary reports them.

        Args:
            suite: Suite name
            index: Trial index within the suite

        Yields:
            The TrialMetrics being filled in
        """
        start_time = time.perf_counter()
        metrics = TrialMetrics(suite=suite, index=index)

        try:
            yield metrics
        except Exception as e:
            metrics.success = False
            metrics.error_message = f"{type(e).__name__}: {e}"
        finally:
            metrics.latency_ms = (time.perf_counter() - start_time) * 1000
            with self._lock:
                self.trials.append(metrics)

            self.logger.debug(
                "Trial completed",
                extra={"trial_metrics": metrics.to_dict()}
            )

    def ordered(self) -> List[TrialMetrics]:
        """Trials sorted by (suite, index), independent of completion order."""
        with self._lock:
            return sorted(self.trials, key=lambda t: (t.suite, t.index))

    def get_summary(self) -> Dict[str, Any]:
        """Get summary statistics for all tracked trials."""
        trials = self.ordered()
        if not trials:
            return {
                "total_trials": 0,
                "passed": 0,
                "failed": 0,
                "avg_latency_ms": 0.0,
                "suites": {},
            }

        failed = [t for t in trials if not t.success]

        return {
            "total_trials": len(trials),
            "passed": len(trials) - len(failed),
            "failed": len(failed),
            "avg_latency_ms": round(sum(t.latency_ms for t in trials) / len(trials), 2),
            "suites": self._group_by_suite(trials),
        }

    def _group_by_suite(self, trials: List[TrialMetrics]) -> Dict[str, Dict[str, Any]]:
        by_suite: Dict[str, List[TrialMetrics]] = {}
        for trial in trials:
            by_suite.setdefault(trial.suite, []).append(trial)

        result = {}
        for suite, items in by_suite.items():
            failures = [t for t in items if not t.success]
            result[suite] = {
                "count": len(items),
                "failed": len(failures),
                "first_failure": (
                    {"index": failures[0].index, "error": failures[0].error_message}
                    if failures else None
                ),
                "total_latency_ms": round(sum(t.latency_ms for t in items), 2),
            }
        return result

    def reset(self) -> None:
        """Clear all tracked trials."""
        with self._lock:
            self.trials = []


def track_performance(func: Callable) -> Callable:
    """
    Decorator to track function performance.

    Logs execution time and any errors.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        logger = logging.getLogger(func.__module__)
        start_time = time.perf_counter()

        try:
            result = func(*args, **kwargs)
            elapsed_ms = (time.perf_counter() - start_time) * 1000

            logger.debug(
                f"Function {func.__name__} completed",
                extra={
                    "function_name": func.__name__,
                    "elapsed_ms": round(elapsed_ms, 2),
                    "success": True,
                }
            )
            return result
        except Exception as e:
            elapsed_ms = (time.perf_counter() - start_time) * 1000

            logger.error(
                f"Function {func.__name__} failed: {e}",
                extra={
                    "function_name": func.__name__,
                    "elapsed_ms": round(elapsed_ms, 2),
                    "success": False,
                    "error": str(e),
                }
            )
            raise

    return wrapper
