"""Command-line surface.

    sonoviz serve    --wav music.wav --port 8765 ...
    sonoviz author   "a volume bar" --mock-fixtures fixtures/mock_llm/ok
    sonoviz compile  script.ssc
    sonoviz analyze  recording.wav

Exit codes: 0 success, 2 usage, 3 compile errors, 4 authoring failure,
5 I/O failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COMPILE = 3
EXIT_AUTHORING = 4
EXIT_IO = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonoviz",
        description="Sound-reactive visualization engine: author scripts from "
        "prompts, analyze audio, and stream shapes to a browser.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_agent_flags(p):
        p.add_argument("--registry", default="scripts.json", help="registry JSON path")
        p.add_argument("--mock-fixtures", help="mock agent fixture directory")
        p.add_argument("--endpoint", help="live chat-completion endpoint URL")
        p.add_argument("--model", help="live model id")
        p.add_argument(
            "--api-key-env",
            default="SONO_API_KEY",
            help="environment variable holding the API key",
        )
        p.add_argument(
            "--max-repair-iterations", type=int, default=3, help="checker loop bound"
        )

    serve = sub.add_parser("serve", help="run the engine and WebSocket endpoint")
    serve.add_argument("--config", help="key=value config file (flags win)")
    serve.add_argument("--port", type=int, help="WebSocket/HTTP port (default 8765)")
    serve.add_argument("--wav", help="replay this WAV file as the audio source")
    serve.add_argument("--loop", action="store_true", help="loop WAV replay")
    serve.add_argument("--synth", help='synthesize tones, e.g. "440:1.0,880:0.25"')
    serve.add_argument("--live", action="store_true", help="capture from the microphone")
    serve.add_argument("--tick-rate", type=float, help="fixed update rate in Hz")
    serve.add_argument("--frame-rate", type=float, help="frame emission rate in Hz")
    serve.add_argument("--step-budget", type=int, help="per-handler step budget")
    serve.add_argument("--static-dir", help="directory of UI files to serve at /")
    add_agent_flags(serve)

    author_p = sub.add_parser("author", help="author one script from a prompt")
    author_p.add_argument("prompt", help="natural-language description")
    add_agent_flags(author_p)

    compile_p = sub.add_parser("compile", help="compile a script and print diagnostics")
    compile_p.add_argument("file", help="script file (.ssc)")

    analyze_p = sub.add_parser("analyze", help="emit NDJSON sound features for a WAV")
    analyze_p.add_argument("wav", help="input WAV file")

    return parser


def _agent_config(args) -> Optional["AgentConfig"]:
    from sonoviz.agents.config import AgentConfig

    if args.endpoint or args.model:
        if not (args.endpoint and args.model):
            raise SystemExit("--endpoint and --model go together")
        return AgentConfig(
            mode="live",
            endpoint=args.endpoint,
            model_id=args.model,
            api_key_env=args.api_key_env,
            max_repair_iterations=args.max_repair_iterations,
        )
    if args.mock_fixtures:
        return AgentConfig(
            mode="mock",
            mock_fixture_dir=args.mock_fixtures,
            max_repair_iterations=args.max_repair_iterations,
        )
    return None


def cmd_compile(args) -> int:
    from sonoviz.script.compiler import compile_script

    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    result = compile_script(text)
    for diagnostic in result.diagnostics:
        print(diagnostic.format())
    return EXIT_OK if result.ok else EXIT_COMPILE


def cmd_analyze(args) -> int:
    from sonoviz.audio.features import extract_features
    from sonoviz.audio.sources import chunk_signal
    from sonoviz.audio.wavio import read_wav

    try:
        samples, rate = read_wav(args.wav)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for chunk in chunk_signal(samples, rate):
        features = extract_features(chunk)
        record = {
            "seq": features.seq,
            "t_ms": features.timestamp_ms,
            "dominant_hz": features.dominant_freq_hz,
            "norm": features.normalized,
            "rms": features.rms,
        }
        print(json.dumps(record))
    return EXIT_OK


def cmd_author(args) -> int:
    from sonoviz.agents.pipeline import author
    from sonoviz.agents.registry import RegistryError, registry_load

    config = _agent_config(args)
    if config is None:
        print(
            "error: authoring needs --mock-fixtures or --endpoint/--model",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        registry = registry_load(args.registry)
    except RegistryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    def on_status(phase: str, detail: str) -> None:
        print(f"[{phase}] {detail}".rstrip())

    result = author(
        args.prompt, registry, config, registry_path=args.registry, on_status=on_status
    )
    for entry in result.transcript:
        print(
            f"{entry.agent}: request {entry.request_sha256[:12]} "
            f"response {entry.response_sha256[:12]} "
            f"({len(entry.diagnostics)} diagnostic(s))"
        )
    if not result.succeeded:
        print(f"authoring failed: {result.failure_reason}", file=sys.stderr)
        for diagnostic in result.last_diagnostics:
            print(diagnostic.format(), file=sys.stderr)
        return EXIT_AUTHORING
    print(
        f"authored {result.script.title!r} in {result.wall_time_ms:.0f} ms "
        f"({result.iterations_used} repair iteration(s))"
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    from sonoviz.session.config import (
        AudioSourceConfig,
        SessionConfig,
        load_config_file,
        parse_tone_spec,
    )
    from sonoviz.session.runtime import serve

    file_values: dict[str, str] = {}
    if args.config:
        try:
            file_values = load_config_file(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO

    def pick(flag_value, file_key: str, default, convert=str):
        if flag_value is not None and flag_value is not False:
            return flag_value
        if file_key in file_values:
            return convert(file_values[file_key])
        return default

    if args.wav:
        audio = AudioSourceConfig(kind="wav", wav_path=args.wav, loop=args.loop)
    elif args.synth:
        audio = AudioSourceConfig(kind="synth", tones=parse_tone_spec(args.synth))
    elif args.live:
        audio = AudioSourceConfig(kind="live")
    elif "audio" in file_values:
        kind, _, rest = file_values["audio"].partition(":")
        if kind == "wav":
            audio = AudioSourceConfig(
                kind="wav",
                wav_path=rest,
                loop=file_values.get("loop", "false").lower() == "true",
            )
        elif kind == "synth":
            audio = AudioSourceConfig(kind="synth", tones=parse_tone_spec(rest))
        else:
            audio = AudioSourceConfig(kind="live")
    else:
        audio = AudioSourceConfig(kind="synth")

    config = SessionConfig(
        audio=audio,
        port=int(pick(args.port, "port", 8765, int)),
        registry_path=pick(
            args.registry if args.registry != "scripts.json" else None,
            "registry",
            args.registry,
        ),
        agent=_agent_config(args),
        tick_rate_hz=float(pick(args.tick_rate, "tick_rate", 50.0, float)),
        frame_rate_hz=float(pick(args.frame_rate, "frame_rate", 30.0, float)),
        step_budget=int(pick(args.step_budget, "step_budget", 200_000, int)),
        static_dir=pick(args.static_dir, "static_dir", None),
    )
    print(f"serving on ws://0.0.0.0:{config.port}/stream (Ctrl-C to stop)")
    try:
        asyncio.run(serve(config))
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "serve": cmd_serve,
        "author": cmd_author,
        "compile": cmd_compile,
        "analyze": cmd_analyze,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
