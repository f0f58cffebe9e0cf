"""External-solver orchestration: input-deck templating, subprocess launch,
lock-file completion polling, results-file handoff.

The protocol mirrors the usual batch-solver workflow: the job is launched,
the launcher may return while the solver still runs, and completion is
signalled by the disappearance of the ``{job}.lck`` sentinel file.  Process
exit alone is never treated as completion.
"""

from __future__ import annotations

import shlex
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "JobSpec",
    "JobError",
    "MarkerNotFound",
    "SpawnFailure",
    "JobTimeout",
    "MissingResults",
    "render_input",
    "run_job",
]


class JobError(Exception):
    """Base class for orchestration failures."""


class MarkerNotFound(JobError):
    """A substitution marker occurs on no line of the template."""


class SpawnFailure(JobError):
    """The solver command could not be started."""


class JobTimeout(JobError):
    """The lock file persisted past the configured timeout."""


class MissingResults(JobError):
    """The job completed but left no results file."""


@dataclass(frozen=True)
class JobSpec:
    """How to launch one solver job and wait for it."""

    command_template: str            # shell-less command line with {job}
    job_name: str
    workdir: Path = Path(".")
    initial_wait: float = 0.5
    poll_interval: float = 0.1
    timeout: float = 30.0
    cleanup_suffixes: tuple = ()     # e.g. (".com", ".prt", ".sim")

    def __post_init__(self):
        if self.initial_wait < 0 or self.poll_interval <= 0:
            raise ValueError("initial_wait must be >= 0 and poll_interval > 0")
        if self.timeout <= self.initial_wait:
            raise ValueError("timeout must exceed initial_wait")
        object.__setattr__(self, "workdir", Path(self.workdir))


def render_input(template_text: str, substitutions) -> str:
    """Rewrite a solver input deck by whole-line marker replacement.

    Every line containing a marker is replaced wholesale by the corresponding
    replacement line; all other lines pass through byte-identical.  Raises
    :class:`MarkerNotFound` for markers that match no line.
    """
    ends_with_newline = template_text.endswith("\n")
    lines = template_text.split("\n")
    if ends_with_newline:
        lines = lines[:-1]
    # markers are matched against the original lines only; replacement lines
    # are never rescanned, so a replacement containing a marker is left alone
    out_lines = list(lines)
    for marker, replacement in substitutions:
        hit = False
        for i, line in enumerate(lines):
            if marker in line:
                out_lines[i] = replacement
                hit = True
        if not hit:
            raise MarkerNotFound(f"marker {marker!r} occurs on no template line")
    out = "\n".join(out_lines)
    return out + "\n" if ends_with_newline else out


def run_job(spec: JobSpec) -> Path:
    """Launch the solver and wait for the lock file to clear.

    Returns the path to ``{job}.fil``.  Captured stdout/stderr are persisted
    as ``{job}.stdout`` / ``{job}.stderr`` next to the job for post-mortem.
    Cleanup suffixes are deleted after the results file is confirmed; the
    results file itself is never deleted even if listed.
    """
    workdir = spec.workdir
    command = shlex.split(spec.command_template.format(job=spec.job_name))
    stdout_path = workdir / f"{spec.job_name}.stdout"
    stderr_path = workdir / f"{spec.job_name}.stderr"
    try:
        with open(stdout_path, "w") as out, open(stderr_path, "w") as err:
            process = subprocess.Popen(
                command, cwd=workdir, stdout=out, stderr=err
            )
    except OSError as exc:
        raise SpawnFailure(f"cannot start {command!r}: {exc}") from exc

    deadline = time.monotonic() + spec.timeout
    time.sleep(min(spec.initial_wait, spec.timeout))
    lck = workdir / f"{spec.job_name}.lck"
    while lck.exists():
        if time.monotonic() >= deadline:
            process.poll()
            raise JobTimeout(
                f"lock file {lck} still present after {spec.timeout} s"
            )
        time.sleep(spec.poll_interval)

    fil = workdir / f"{spec.job_name}.fil"
    if not fil.exists():
        try:
            process.wait(timeout=max(deadline - time.monotonic(), 0.1))
        except subprocess.TimeoutExpired:
            pass
        detail = ""
        if process.returncode:
            detail = (
                f"; exit code {process.returncode}"
                f"; stderr: {stderr_path.read_text().strip()!r}"
            )
        raise MissingResults(f"results file {fil} absent after completion{detail}")

    for suffix in spec.cleanup_suffixes:
        if suffix == ".fil":
            continue
        victim = workdir / f"{spec.job_name}{suffix}"
        if victim.exists():
            victim.unlink()
    return fil
