"""Figure specifications: which CSV, which columns, which labels.

The column names mirror the simulator's CSV schema; changing them here
without changing the producer breaks rendering with a named diagnostic,
never silently.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SeriesSpec:
    column: str
    label: str
    band_column: str | None = None  # half-width (std) column for a shaded band
    thin: bool = False  # de-emphasised line, for instantaneous traces


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_csv: str
    x_column: str
    x_label: str
    y_label: str
    series: tuple[SeriesSpec, ...]

    @property
    def output_name(self) -> str:
        return f"{self.figure_id}.svg"

    def columns_used(self) -> list[str]:
        cols = [self.x_column]
        for s in self.series:
            cols.append(s.column)
            if s.band_column is not None:
                cols.append(s.band_column)
        return cols


def _timeseries(figure_id: str, series: tuple[SeriesSpec, ...], y_label: str = "utility") -> FigureSpec:
    return FigureSpec(
        figure_id=figure_id,
        input_csv=f"{figure_id}.csv",
        x_column="t",
        x_label="time slot",
        y_label=y_label,
        series=series,
    )


FIGURE_SPECS: dict[str, FigureSpec] = {
    spec.figure_id: spec
    for spec in (
        _timeseries(
            "steady-state-pt",
            (
                SeriesSpec("optimistic_u", "optimistic, instantaneous", thin=True),
                SeriesSpec("optimistic_u_mavg", "optimistic, moving average"),
                SeriesSpec("conservative_u", "conservative, instantaneous", thin=True),
                SeriesSpec("conservative_u_mavg", "conservative, moving average"),
            ),
        ),
        FigureSpec(
            "pa-sweep-optimistic",
            "pa-sweep-optimistic.csv",
            "p_a",
            "attack probability",
            "mean utility",
            (SeriesSpec("mean_pt", "optimistic", band_column="std_pt"),),
        ),
        FigureSpec(
            "pa-sweep-both-pdetect",
            "pa-sweep-both-pdetect.csv",
            "p_a",
            "attack probability",
            "mean utility",
            (
                SeriesSpec("optimistic_pd09_mean", "optimistic, detection 0.9", "optimistic_pd09_std"),
                SeriesSpec("conservative_pd09_mean", "conservative, detection 0.9", "conservative_pd09_std"),
                SeriesSpec("optimistic_pd05_mean", "optimistic, detection 0.5", "optimistic_pd05_std"),
                SeriesSpec("conservative_pd05_mean", "conservative, detection 0.5", "conservative_pd05_std"),
            ),
        ),
        FigureSpec(
            "pdetect-sweep",
            "pdetect-sweep.csv",
            "p_detect",
            "detection probability",
            "mean utility",
            (SeriesSpec("mean_pt", "optimistic", band_column="std_pt"),),
        ),
        _timeseries(
            "pt-vs-eut-timeseries",
            (
                SeriesSpec("optimistic_pt_u", "optimistic PT, instantaneous", thin=True),
                SeriesSpec("optimistic_pt_u_mavg", "optimistic PT, moving average"),
                SeriesSpec("optimistic_eut_u", "optimistic EUT, instantaneous", thin=True),
                SeriesSpec("optimistic_eut_u_mavg", "optimistic EUT, moving average"),
                SeriesSpec("conservative_pt_u", "conservative PT, instantaneous", thin=True),
                SeriesSpec("conservative_pt_u_mavg", "conservative PT, moving average"),
                SeriesSpec("conservative_eut_u", "conservative EUT, instantaneous", thin=True),
                SeriesSpec("conservative_eut_u_mavg", "conservative EUT, moving average"),
            ),
        ),
        FigureSpec(
            "pt-vs-eut-pa-sweep",
            "pt-vs-eut-pa-sweep.csv",
            "p_a",
            "attack probability",
            "mean utility",
            (
                SeriesSpec("pt_mean", "prospect theory", "pt_std"),
                SeriesSpec("eut_mean", "expected utility", "eut_std"),
            ),
        ),
        FigureSpec(
            "pt-vs-eut-both-systems",
            "pt-vs-eut-both-systems.csv",
            "p_a",
            "attack probability",
            "mean utility",
            (
                SeriesSpec("optimistic_pt_mean", "optimistic PT", "optimistic_pt_std"),
                SeriesSpec("optimistic_eut_mean", "optimistic EUT", "optimistic_eut_std"),
                SeriesSpec("conservative_pt_mean", "conservative PT", "conservative_pt_std"),
                SeriesSpec("conservative_eut_mean", "conservative EUT", "conservative_eut_std"),
            ),
        ),
        FigureSpec(
            "pt-vs-eut-pdetect",
            "pt-vs-eut-pdetect.csv",
            "p_detect",
            "detection probability",
            "mean utility",
            (
                SeriesSpec("pt_mean", "prospect theory", "pt_std"),
                SeriesSpec("eut_mean", "expected utility", "eut_std"),
            ),
        ),
        _timeseries(
            "cwma-vs-ewma-baseline",
            (
                SeriesSpec("score", "slot score", thin=True),
                SeriesSpec("cwma", "cumulative average"),
                SeriesSpec("ewma", "exponential average"),
            ),
            y_label="integrity score",
        ),
        _timeseries(
            "awma-vs-cwma",
            (
                SeriesSpec("score", "slot score", thin=True),
                SeriesSpec("cwma", "cumulative average"),
                SeriesSpec("awma", "asymmetric average"),
            ),
            y_label="integrity score",
        ),
        _timeseries(
            "awma-vs-ewma",
            (
                SeriesSpec("score", "slot score", thin=True),
                SeriesSpec("ewma", "exponential average"),
                SeriesSpec("awma", "asymmetric average"),
            ),
            y_label="integrity score",
        ),
        _timeseries(
            "onoff-ratio-compare",
            (
                SeriesSpec("awma_2to1", "asymmetric average, 2:1 schedule"),
                SeriesSpec("awma_3to1", "asymmetric average, 3:1 schedule"),
            ),
            y_label="integrity score",
        ),
    )
}
