"""Command-line subcommands."""

from app.cli import profile, reproduce, simulate, spectrum, threshold

COMMANDS = {
    "spectrum": spectrum.run,
    "threshold": threshold.run,
    "reproduce": reproduce.run,
    "simulate": simulate.run,
    "profile": profile.run,
}
