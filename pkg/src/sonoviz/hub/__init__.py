"""WebSocket wire layer: message codec, client sessions, broadcast hub."""

from sonoviz.hub.wire import (
    PHASES,
    ProtocolError,
    author_message,
    author_status_message,
    command_from_json,
    command_to_json,
    decode_message,
    diagnostic_to_json,
    diagnostics_message,
    encode_message,
    features_message,
    frame_message,
    list_scripts_message,
    protocol_error_message,
    script_list_message,
    set_draw_ui_message,
    validate_message,
)
from sonoviz.hub.server import ClientSession, StreamHub, create_app

__all__ = [
    "PHASES",
    "ClientSession",
    "ProtocolError",
    "StreamHub",
    "author_message",
    "author_status_message",
    "command_from_json",
    "command_to_json",
    "create_app",
    "decode_message",
    "diagnostic_to_json",
    "diagnostics_message",
    "encode_message",
    "features_message",
    "frame_message",
    "list_scripts_message",
    "protocol_error_message",
    "script_list_message",
    "set_draw_ui_message",
    "validate_message",
]
