import pytest
from hypothesis import settings

from rotting_bandits.env import Environment

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile("default")


class PresetMeansEnvironment(Environment):
    """Environment whose first arms get chosen initial means.

    Once the preset list is exhausted, falls back to the uniform stream.
    """

    def __init__(self, config, means):
        super().__init__(config)
        self._preset = list(means)

    def _draw_initial_mean(self) -> float:
        if self._preset:
            return self._preset.pop(0)
        return super()._draw_initial_mean()


class RecordingEnvironment(Environment):
    """Environment that logs (arm, observation) for every pull."""

    def __init__(self, config):
        super().__init__(config)
        self.log = []

    def pull(self, arm):
        obs = super().pull(arm)
        self.log.append((arm, obs))
        return obs


class RecordingPresetEnvironment(PresetMeansEnvironment):
    def __init__(self, config, means):
        super().__init__(config, means)
        self.log = []

    def pull(self, arm):
        obs = super().pull(arm)
        self.log.append((arm, obs))
        return obs


@pytest.fixture
def preset_env():
    return PresetMeansEnvironment


@pytest.fixture
def recording_env():
    return RecordingEnvironment
