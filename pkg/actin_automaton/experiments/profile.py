"""
Excitation level around each stimulation of a re-stimulated run: how far
the level drops when the stimulus lands and how many steps it takes to
get back into its pre-stimulation band.
"""

from pydantic import BaseModel

from actin_automaton.models import StimulationEvent

DEFAULT_WINDOW = 20


class ProfileWindow(BaseModel):
    step: int
    scenario: str
    level_before: float
    band: tuple[int, int]
    level_at: int
    level_min_after: int
    drop: float
    recovery_steps: int | None


def excitation_profile(
    series: list[int],
    stimulations: list[StimulationEvent],
    window: int = DEFAULT_WINDOW,
) -> list[ProfileWindow]:
    """
    One window per stimulation that has history before it. The band is the
    min/max excited count over the ``window`` steps preceding the stimulus;
    recovery is the first later step whose level is back inside it.
    """
    if window < 1:
        raise ValueError("window must be >= 1")

    profile = []
    for event in stimulations:
        t = event.step
        if t == 0 or t >= len(series):
            continue
        before = series[max(0, t - window):t]
        lo, hi = min(before), max(before)
        after = series[t:t + window + 1]

        recovery = None
        for k in range(1, len(series) - t):
            if lo <= series[t + k] <= hi:
                recovery = k
                break

        level_before = sum(before) / len(before)
        profile.append(ProfileWindow(
            step=t,
            scenario=event.scenario,
            level_before=level_before,
            band=(lo, hi),
            level_at=series[t],
            level_min_after=min(after),
            drop=level_before - min(after),
            recovery_steps=recovery,
        ))
    return profile
