"""Build-pass check: drop the generated script into a scaffold, compile it, then test it."""

from __future__ import annotations

import logging
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from components.config import HarnessConfig
from components.errors import BuildTimeout, WorkspaceSetupFailed

logger = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parents[2]


@dataclass(frozen=True)
class BuildPassResult:
    compiled: bool
    tested: bool
    passed: bool
    compiler_output: str = ""
    test_output: str = ""

    def __post_init__(self):
        if self.passed != (self.compiled and self.tested):
            raise ValueError("passed must equal compiled and tested")
        if self.tested and not self.compiled:
            raise ValueError("tests cannot pass without compiling")

    @classmethod
    def compile_failed(cls, output: str) -> "BuildPassResult":
        return cls(False, False, False, output, "")

    def to_dict(self) -> dict:
        return {
            "compiled": self.compiled,
            "tested": self.tested,
            "passed": self.passed,
            "compiler_output": self.compiler_output,
            "test_output": self.test_output,
        }


def _command(template: str, workspace: Path, script: Path) -> list[str]:
    text = template.format(
        python=shlex.quote(sys.executable),
        workspace=shlex.quote(str(workspace)),
        script=shlex.quote(str(script)),
    )
    return shlex.split(text)


def _run(stage: str, template: str, workspace: Path, script: Path, timeout: float, partial=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(p for p in (str(REPO_ROOT), env.get("PYTHONPATH")) if p)
    argv = _command(template, workspace, script)
    logger.debug("%s: %s", stage, " ".join(argv))
    try:
        done = subprocess.run(argv, cwd=workspace, env=env, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired as e:
        raise BuildTimeout(stage, timeout, partial) from e
    except OSError as e:
        raise WorkspaceSetupFailed(f"cannot run {stage} command {argv[0]!r}: {e}") from e
    output = (done.stdout + done.stderr).replace(str(workspace), "<workspace>")
    return done.returncode == 0, output.strip()


def build_pass(code: str, harness: HarnessConfig | None = None) -> BuildPassResult:
    """Compile the script inside a fresh copy of the scaffold, then run the tests.

    The test stage only runs once compilation succeeds. A stage that exceeds
    its timeout raises BuildTimeout carrying the partial result.
    """
    harness = harness or HarnessConfig()
    if not harness.compile_command or not harness.test_command:
        raise WorkspaceSetupFailed("harness needs both a compile and a test command")
    if harness.scaffold and not Path(harness.scaffold).is_dir():
        raise WorkspaceSetupFailed(f"scaffold {harness.scaffold} is not a directory")

    with tempfile.TemporaryDirectory(prefix="ccci-build-") as tmp:
        workspace = Path(tmp) / "workspace"
        try:
            if harness.scaffold:
                shutil.copytree(harness.scaffold, workspace)
            else:
                workspace.mkdir()
            script = workspace / harness.script_name
            script.write_text(code, encoding="utf-8")
        except OSError as e:
            raise WorkspaceSetupFailed(f"cannot prepare build workspace: {e}") from e

        compiled, compiler_output = _run(
            "compile", harness.compile_command, workspace, script, harness.compile_timeout,
            BuildPassResult.compile_failed(""),
        )
        if not compiled:
            logger.info("Compilation failed")
            return BuildPassResult.compile_failed(compiler_output)

        tested, test_output = _run(
            "test", harness.test_command, workspace, script, harness.test_timeout,
            BuildPassResult(True, False, False, compiler_output, ""),
        )
        logger.info("Build pass: compiled, tests %s", "passed" if tested else "failed")
        return BuildPassResult(True, tested, tested, compiler_output, test_output)
