from .cli import build_parser, cli_dispatch, main
from .payloads import (
    CODECS,
    decode_frame,
    encode_frame,
    payload_to_sequence,
    payload_to_volume,
    sequence_to_payload,
    volume_to_payload,
)
from .server import create_app, serve

__all__ = [
    "CODECS",
    "build_parser",
    "cli_dispatch",
    "create_app",
    "decode_frame",
    "encode_frame",
    "main",
    "payload_to_sequence",
    "payload_to_volume",
    "sequence_to_payload",
    "serve",
    "volume_to_payload",
]
