from actin_automaton.rings.capacity import CapacityParameters, CapacityReport, memory_capacity
from actin_automaton.rings.memory import (
    GeneratorReport,
    NoiseToleranceReport,
    check_noise_tolerance,
    erase_bit,
    generator_demo,
    write_bit,
)
from actin_automaton.rings.perception import Ring, RingCensus, census, find_rings

__all__ = [
    "CapacityParameters",
    "CapacityReport",
    "GeneratorReport",
    "NoiseToleranceReport",
    "Ring",
    "RingCensus",
    "census",
    "check_noise_tolerance",
    "erase_bit",
    "find_rings",
    "generator_demo",
    "memory_capacity",
    "write_bit",
]
