"""
Telemetry and tracing module.

Wraps OpenTelemetry so the builder, the packing search and sweeps can emit
spans and metrics. ``USE_OPENTELEMETRY`` decides whether anything is
collected; when it is off every call is a no-op. Span attributes may be
permutations or terminal sets; they are converted to strings on the way in.
"""

from collections.abc import Callable, Generator, Iterable
from contextlib import contextmanager
from functools import wraps
from typing import Any, ParamSpec, TypeVar, cast

from opentelemetry import metrics, trace
from opentelemetry.exporter.otlp.proto.grpc.metric_exporter import OTLPMetricExporter
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import ConsoleMetricExporter, PeriodicExportingMetricReader
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter

from godan_idst.config import settings
from godan_idst.core.permutations import Permutation
from godan_idst.utils.logging import get_logger

logger = get_logger(__name__)

P = ParamSpec("P")
R = TypeVar("R")

AttributeValue = str | bool | int | float | list[str] | list[int]


def attribute_value(value: Any) -> AttributeValue:
    """An OpenTelemetry-compatible form of ``value``; terminal sets become string lists."""
    if isinstance(value, str | bool | int | float):
        return value
    if isinstance(value, Permutation):
        return str(value)
    if isinstance(value, Iterable):
        items = list(value)
        if all(isinstance(v, int) and not isinstance(v, bool) for v in items):
            return items
        return [str(v) for v in items]
    return str(value)


class TelemetryManager:
    """
    OpenTelemetry behind the USE_OPENTELEMETRY switch.

    Disabled managers hand out no-op spans and instruments and never touch the
    SDK. Counters and histograms are created once per name.
    """

    _enabled: bool
    _service_name: str
    _meter: metrics.Meter | None

    def __init__(self) -> None:
        self._enabled = bool(settings.USE_OPENTELEMETRY)
        self._service_name = settings.OPENTEL.SERVICE_NAME or "godan_idst"
        self._meter = None
        self._counters: dict[str, metrics.Counter] = {}
        self._histograms: dict[str, metrics.Histogram] = {}

    @property
    def enabled(self) -> bool:
        return self._enabled

    def setup(self) -> None:
        """
        Initialize the SDK from the current settings. Call this once at CLI startup.
        """
        self._enabled = bool(settings.USE_OPENTELEMETRY)
        if not self._enabled:
            logger.debug("telemetry disabled")
            return

        endpoint = settings.OPENTEL.OTEL_ENDPOINT
        try:
            resource = Resource.create(
                attributes={
                    "service.name": self._service_name,
                    "service.version": settings.OPENTEL.SERVICE_VERSION,
                }
            )

            provider = TracerProvider(resource=resource)
            if endpoint:
                span_exporter = OTLPSpanExporter(endpoint=endpoint, insecure=True)
                metric_exporter = OTLPMetricExporter(endpoint=endpoint, insecure=True)
            else:
                span_exporter = ConsoleSpanExporter()  # type: ignore[assignment]
                metric_exporter = ConsoleMetricExporter()  # type: ignore[assignment]
            provider.add_span_processor(BatchSpanProcessor(span_exporter))
            trace.set_tracer_provider(provider)

            reader = PeriodicExportingMetricReader(metric_exporter)
            metrics.set_meter_provider(MeterProvider(resource=resource, metric_readers=[reader]))
            self._meter = metrics.get_meter(self._service_name)
            trace.get_tracer(self._service_name)

            logger.info("telemetry initialized", service=self._service_name, endpoint=endpoint)

        except Exception as e:
            logger.error("telemetry setup failed", error=str(e))
            self._enabled = False

    def disable(self) -> None:
        """Turn telemetry off for the rest of the process (``--no-telemetry``)."""
        self._enabled = False

    @contextmanager
    def span(
        self, name: str, attributes: dict[str, Any] | None = None
    ) -> Generator[trace.Span | None]:
        """
        Context manager for creating a span.

        Usage:
            with telemetry.span("oracle.kappa_S", {"terminals": terminals}):
                do_work()
        """
        if not self._enabled:
            yield None
            return

        converted = {k: attribute_value(v) for k, v in (attributes or {}).items()}
        tracer = trace.get_tracer(self._service_name)
        with tracer.start_as_current_span(name, attributes=converted) as span:
            yield span

    def instrument(self, name: str | None = None) -> Callable[[Callable[P, R]], Callable[P, R]]:
        """
        Decorator to trace a function automatically.

        Usage:
            @telemetry.instrument("builder.build_idsts")
            def build_idsts(...): ...
        """

        def decorator(func: Callable[P, R]) -> Callable[P, R]:
            span_name = name or func.__name__

            @wraps(func)
            def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
                if not self._enabled:
                    return func(*args, **kwargs)

                with self.span(span_name):
                    return func(*args, **kwargs)

            return wrapper

        return decorator

    def get_counter(self, name: str, description: str = "", unit: str = "1") -> metrics.Counter:
        """The counter ``name``; a no-op counter while disabled."""
        if not self._enabled or self._meter is None:
            return cast(metrics.Counter, _NoOpCounter())
        if name not in self._counters:
            self._counters[name] = self._meter.create_counter(
                name, description=description, unit=unit
            )
        return self._counters[name]

    def get_histogram(self, name: str, description: str = "", unit: str = "1") -> metrics.Histogram:
        if not self._enabled or self._meter is None:
            return cast(metrics.Histogram, _NoOpHistogram())
        if name not in self._histograms:
            self._histograms[name] = self._meter.create_histogram(
                name, description=description, unit=unit
            )
        return self._histograms[name]


class _NoOpCounter:
    def add(self, amount: float | int, attributes: dict[str, Any] | None = None) -> None:
        pass


class _NoOpHistogram:
    def record(self, amount: float | int, attributes: dict[str, Any] | None = None) -> None:
        pass


telemetry = TelemetryManager()
