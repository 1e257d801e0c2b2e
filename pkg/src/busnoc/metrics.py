"""Latency / throughput accumulation plus protocol event counters.

Latency runs from packet generation (including source-queue wait) to tail
ejection at the destination PE; packets created before the warm-up boundary
are excluded. Throughput is delivered flits in the measurement window,
normalized per cycle per node.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def manhattan(a, b) -> int:
    return abs(a.x - b.x) + abs(a.y - b.y)


@dataclass
class Report:
    avg_latency: float | None
    max_latency: int | None
    throughput: float
    packets_generated: int
    packets_delivered: int
    deadlocks_detected: int
    bus_recoveries: int
    cancellations: int
    saturated: bool


@dataclass
class MetricsAccumulator:
    warmup_cycles: int
    window_cycles: int
    num_nodes: int

    latency_sum: int = 0
    latency_count: int = 0
    max_latency: int = 0
    delivered_flits_in_window: int = 0
    packets_generated: int = 0
    packets_delivered: int = 0
    deadlocks_detected: int = 0
    bus_recoveries: int = 0
    cancellations: int = 0
    saturated: bool = False

    def record_generated(self, count: int = 1) -> None:
        self.packets_generated += count

    def record_flit_ejected(self, cycle: int) -> None:
        if cycle >= self.warmup_cycles:
            self.delivered_flits_in_window += 1

    def record_delivery(self, src, dst, length: int, created_cycle: int,
                        tail_arrival_cycle: int) -> None:
        floor = created_cycle + length - 1 + manhattan(src, dst)
        assert tail_arrival_cycle >= floor, (
            f"latency below physical lower bound: tail at {tail_arrival_cycle}, "
            f"floor {floor}"
        )
        self.packets_delivered += 1
        if created_cycle >= self.warmup_cycles:
            lat = tail_arrival_cycle - created_cycle
            self.latency_sum += lat
            self.latency_count += 1
            if lat > self.max_latency:
                self.max_latency = lat

    def finalize(self) -> Report:
        assert self.packets_delivered <= self.packets_generated
        assert self.bus_recoveries <= self.deadlocks_detected
        avg = (
            self.latency_sum / self.latency_count if self.latency_count else None
        )
        denom = self.window_cycles * self.num_nodes
        thr = self.delivered_flits_in_window / denom if denom else 0.0
        return Report(
            avg_latency=avg,
            max_latency=self.max_latency if self.latency_count else None,
            throughput=thr,
            packets_generated=self.packets_generated,
            packets_delivered=self.packets_delivered,
            deadlocks_detected=self.deadlocks_detected,
            bus_recoveries=self.bus_recoveries,
            cancellations=self.cancellations,
            saturated=self.saturated,
        )
