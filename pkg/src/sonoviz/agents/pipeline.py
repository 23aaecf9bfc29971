"""The authoring pipeline: enhance -> generate -> compile -> repair loop.

Each stage is one chat exchange.  Compilation diagnostics feed the checker
agent until the script compiles or the iteration budget runs out; only a
successful run touches the persisted registry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

from sonoviz.agents.config import AgentConfig
from sonoviz.agents.registry import ScriptRecord, ScriptRegistry, registry_save
from sonoviz.agents.templates import load_dsl_reference, load_template, render
from sonoviz.agents.transport import Transport, TransportError, make_transport, prompt_digest
from sonoviz.script.compiler import ScriptSource, compile_script

StatusCallback = Callable[[str, str], None]


class PipelineError(Exception):
    def __init__(self, phase: str, message: str):
        super().__init__(message)
        self.phase = phase


@dataclass(frozen=True)
class AuthoringContext:
    """Everything the generation agent sees for one request."""

    current_prompt: str
    previous_prompt: Optional[str] = None
    previous_script: Optional[ScriptSource] = None
    enhanced_prompt: Optional[str] = None
    docs: str = ""

    def __post_init__(self):
        if not self.current_prompt.strip():
            raise ValueError("prompt must not be empty")


@dataclass(frozen=True)
class TranscriptEntry:
    """One agent exchange: digests keep transcripts small and comparable."""

    agent: str
    request_sha256: str
    response_sha256: str
    diagnostics: tuple = ()


@dataclass(frozen=True)
class AuthoringResult:
    outcome: str  # "success" | "failure"
    script: Optional[object]  # CompiledScript on success
    source: Optional[ScriptSource]
    iterations_used: int
    transcript: tuple
    wall_time_ms: float
    last_diagnostics: tuple = ()
    failure_reason: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.outcome == "success"


def strip_code_fences(text: str) -> str:
    """Remove wrapping triple-backtick fences (with optional language tag)
    and leading blank lines.  Unbalanced fences are left alone.  Applied
    to a fixpoint, so stripping twice equals stripping once."""
    current = text
    while True:
        stripped = _strip_one_fence(current)
        if stripped == current:
            return current
        current = stripped


def _strip_one_fence(text: str) -> str:
    lines = text.split("\n")
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        return ""
    last = len(lines) - 1
    while last > 0 and not lines[last].strip():
        last -= 1
    first = lines[0].strip()
    opens = first.startswith("```") and " " not in first
    closes = last > 0 and lines[last].strip() == "```"
    if opens and closes:
        lines = lines[1:last]
    return "\n".join(lines)


def format_diagnostics(diagnostics) -> str:
    return "\n".join(d.format() for d in diagnostics)


class Pipeline:
    """Drives the three agents over one transport."""

    def __init__(
        self,
        config: AgentConfig,
        transport: Optional[Transport] = None,
        docs: Optional[str] = None,
    ):
        self.config = config
        self.transport = transport if transport is not None else make_transport(config)
        self.docs = docs if docs is not None else load_dsl_reference()

    # -- single agent calls ----------------------------------------------

    def _call(self, agent: str, prompt: str, transcript: Optional[list] = None) -> str:
        try:
            reply = self.transport.complete(agent, prompt)
        except TransportError:
            reply = self.transport.complete(agent, prompt)  # one retry
        if transcript is not None:
            transcript.append(
                TranscriptEntry(
                    agent=agent,
                    request_sha256=prompt_digest(prompt),
                    response_sha256=prompt_digest(reply),
                )
            )
        if not reply.strip():
            raise PipelineError(agent, f"{agent} agent returned an empty reply")
        return reply

    def enhance(self, user_prompt: str, transcript: Optional[list] = None) -> str:
        if not user_prompt.strip():
            raise ValueError("prompt must not be empty")
        prompt = render(
            load_template("enhance"),
            escaped={"USER_PROMPT": user_prompt},
            raw={"DSL_REFERENCE": self.docs},
        )
        return self._call("enhance", prompt, transcript)

    def generate(self, ctx: AuthoringContext, transcript: Optional[list] = None) -> ScriptSource:
        if ctx.enhanced_prompt is None:
            raise ValueError("context has no enhanced prompt")
        prompt = render(
            load_template("generate"),
            escaped={
                "CURRENT_PROMPT": ctx.current_prompt,
                "PREVIOUS_PROMPT": ctx.previous_prompt or "",
                "PREVIOUS_SCRIPT": ctx.previous_script.text if ctx.previous_script else "",
                "ENHANCED_PROMPT": ctx.enhanced_prompt,
                "TITLE_TAG": ctx.current_prompt,
            },
            raw={"DSL_REFERENCE": self.docs},
        )
        reply = self._call("generate", prompt, transcript)
        text = strip_code_fences(reply)
        if not text.strip():
            raise PipelineError("generate", "generation agent returned no code")
        return ScriptSource(text=text, origin="agent")

    def check(
        self,
        source: ScriptSource,
        diagnostics,
        user_prompt: str,
        transcript: Optional[list] = None,
    ) -> ScriptSource:
        if not diagnostics:
            raise ValueError("check_script needs at least one diagnostic")
        prompt = render(
            load_template("check"),
            escaped={"USER_PROMPT": user_prompt},
            raw={
                "DSL_REFERENCE": self.docs,
                "SCRIPT": source.text,
                "DIAGNOSTICS": format_diagnostics(diagnostics),
            },
        )
        reply = self._call("check", prompt, transcript)
        text = strip_code_fences(reply)
        if not text.strip():
            raise PipelineError("check", "checker agent returned no code")
        return ScriptSource(text=text, origin="agent")

    # -- the full loop -----------------------------------------------------

    def author(
        self,
        prompt: str,
        registry: ScriptRegistry,
        registry_path: Optional[str | Path] = None,
        previous: Optional[tuple[str, ScriptSource]] = None,
        on_status: Optional[StatusCallback] = None,
    ) -> AuthoringResult:
        """Run the whole pipeline for one prompt.

        Success upserts exactly one registry record (and persists it when
        registry_path is given); any failure leaves the registry alone.
        Never raises: failures come back as a failure-outcome result.
        """
        started = time.perf_counter()
        status = on_status or (lambda phase, detail: None)
        transcript: list[TranscriptEntry] = []
        source: Optional[ScriptSource] = None
        iterations = 0
        last_diagnostics: tuple = ()

        def failure(reason: str) -> AuthoringResult:
            status("failed", reason)
            return AuthoringResult(
                outcome="failure",
                script=None,
                source=source,
                iterations_used=iterations,
                transcript=tuple(transcript),
                wall_time_ms=(time.perf_counter() - started) * 1000.0,
                last_diagnostics=last_diagnostics,
                failure_reason=reason,
            )

        try:
            status("enhance", prompt)
            enhanced = self.enhance(prompt, transcript)
            ctx = AuthoringContext(
                current_prompt=prompt,
                previous_prompt=previous[0] if previous else None,
                previous_script=previous[1] if previous else None,
                enhanced_prompt=enhanced,
                docs=self.docs,
            )
            status("generate", "")
            source = self.generate(ctx, transcript)
            status("compile", "")
            result = compile_script(source)
            last_diagnostics = tuple(result.diagnostics)
            transcript[-1] = replace(transcript[-1], diagnostics=last_diagnostics)

            while not result.ok and iterations < self.config.max_repair_iterations:
                status("check", f"repair iteration {iterations + 1}")
                source = self.check(source, result.diagnostics, prompt, transcript)
                iterations += 1
                status("compile", "")
                result = compile_script(source)
                last_diagnostics = tuple(result.diagnostics)
                transcript[-1] = replace(transcript[-1], diagnostics=last_diagnostics)
        except (TransportError, PipelineError, ValueError) as exc:
            return failure(str(exc))

        if not result.ok:
            return failure(
                f"script still has errors after {iterations} repair iteration(s)"
            )

        registry.upsert(
            ScriptRecord(userPrompt=prompt, scriptContent=source.text, drawUI=True)
        )
        if registry_path is not None:
            registry_save(registry_path, registry)
        status("done", result.script.title)
        return AuthoringResult(
            outcome="success",
            script=result.script,
            source=source,
            iterations_used=iterations,
            transcript=tuple(transcript),
            wall_time_ms=(time.perf_counter() - started) * 1000.0,
            last_diagnostics=last_diagnostics,
        )


def author(
    prompt: str,
    registry: ScriptRegistry,
    config: AgentConfig,
    registry_path: Optional[str | Path] = None,
    previous: Optional[tuple[str, ScriptSource]] = None,
    on_status: Optional[StatusCallback] = None,
    transport: Optional[Transport] = None,
) -> AuthoringResult:
    pipeline = Pipeline(config, transport=transport)
    return pipeline.author(
        prompt,
        registry,
        registry_path=registry_path,
        previous=previous,
        on_status=on_status,
    )
