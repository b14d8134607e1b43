"""Problem files: JSON encoding of states, pure states and channels.

Complex numbers are ``[re, im]`` pairs. A density operator is
``{"dim": d, "matrix": [[...], ...]}``, a pure state ``{"amplitudes": [...]}``
and a channel ``{"kraus": [matrix, ...]}``. Objects may also be referred to
by builtin names such as ``plus``, ``maxent(3)`` or ``depolarizing(2)``.
"""
import json
import re
from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from .channels import KrausChannel, depolarizing_channel, identity_channel, unitary_channel
from .errors import ValidationError

SCHEMA_VERSION = "1"


def encode_matrix(a):
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def encode_vector(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _complex(entry, where):
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry
    ):
        return complex(entry[0], entry[1])
    raise ValidationError(f"{where}: complex entries must be [re, im] pairs, got {entry!r}")


def decode_vector(data, where="vector"):
    if not isinstance(data, list) or not data:
        raise ValidationError(f"{where}: expected a non-empty list of [re, im] pairs")
    return np.array([_complex(e, where) for e in data], dtype=complex)


def decode_matrix(data, where="matrix"):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ValidationError(f"{where}: expected a list of rows")
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise ValidationError(f"{where}: rows have different lengths")
    return ops.as_matrix([[_complex(e, where) for e in r] for r in data], where)


def encode_density(rho):
    return {"dim": int(np.shape(rho)[0]), "matrix": encode_matrix(rho)}


def decode_density(obj, where="state"):
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValidationError(f"{where}: density operator needs a 'matrix' field")
    m = decode_matrix(obj["matrix"], where)
    if "dim" in obj and obj["dim"] != m.shape[0]:
        raise ValidationError(f"{where}: 'dim' is {obj['dim']} but the matrix is {m.shape[0]}x{m.shape[1]}")
    return ops.validate_density(m, where)


def decode_pure(obj, where="pure state"):
    if not isinstance(obj, dict) or "amplitudes" not in obj:
        raise ValidationError(f"{where}: pure state needs an 'amplitudes' field")
    return ops.validate_pure(decode_vector(obj["amplitudes"], where), where)


def encode_channel(channel):
    return {"kraus": [encode_matrix(k) for k in channel.kraus_ops]}


def decode_channel(obj, where="channel"):
    if not isinstance(obj, dict) or not isinstance(obj.get("kraus"), list):
        raise ValidationError(f"{where}: channel needs a 'kraus' list")
    ks = [decode_matrix(k, f"{where} Kraus operator {i}") for i, k in enumerate(obj["kraus"])]
    return KrausChannel(tuple(ks), name=where)


@dataclass
class ProblemFile:
    schema_version: str = SCHEMA_VERSION
    states: dict = field(default_factory=dict)
    pure_states: dict = field(default_factory=dict)
    channels: dict = field(default_factory=dict)
    priors: tuple = None

    def to_json(self):
        out = {"schema_version": self.schema_version}
        if self.states:
            out["states"] = {k: encode_density(v) for k, v in self.states.items()}
        if self.pure_states:
            out["pure_states"] = {k: {"amplitudes": encode_vector(v)} for k, v in self.pure_states.items()}
        if self.channels:
            out["channels"] = {k: encode_channel(v) for k, v in self.channels.items()}
        if self.priors is not None:
            out["priors"] = [float(p) for p in self.priors]
        return out

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise ValidationError("problem file: top level must be an object")
        version = str(data.get("schema_version", SCHEMA_VERSION))
        if version != SCHEMA_VERSION:
            raise ValidationError(f"problem file: unsupported schema_version {version!r}")
        states = {k: decode_density(v, f"state '{k}'") for k, v in data.get("states", {}).items()}
        pure = {k: decode_pure(v, f"pure state '{k}'") for k, v in data.get("pure_states", {}).items()}
        chans = {k: decode_channel(v, f"channel '{k}'") for k, v in data.get("channels", {}).items()}
        priors = data.get("priors")
        if priors is not None:
            if not (isinstance(priors, list) and len(priors) == 2):
                raise ValidationError("problem file: 'priors' must be a pair")
            p0, p1 = (float(p) for p in priors)
            if min(p0, p1) < 0 or abs(p0 + p1 - 1.0) > 1e-12:
                raise ValidationError(f"problem file: priors must be non-negative and sum to 1, got {priors}")
            priors = (p0, p1)
        return cls(version, states, pure, chans, priors)


def load_problem(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})")
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read problem file ({exc.strerror})")
    return ProblemFile.from_json(data)


# ---------------------------------------------------------------------------
# builtin names
# ---------------------------------------------------------------------------

_CALL = re.compile(r"^([a-z\-]+)\(([^)]*)\)$")


def _parse_call(name):
    m = _CALL.match(name.strip())
    if not m:
        return name.strip(), []
    args = [a.strip() for a in m.group(2).split(",") if a.strip()]
    return m.group(1), args


def _ints(args, n, name):
    if len(args) != n:
        raise ValidationError(f"{name}: expected {n} integer argument(s)")
    try:
        vals = [int(a) for a in args]
    except ValueError:
        raise ValidationError(f"{name}: arguments must be integers, got {args}")
    if any(v < 0 for v in vals):
        raise ValidationError(f"{name}: arguments must be non-negative")
    return vals


def builtin_pure(name):
    """Pure-state builtins: zero, one, plus, minus, basis(i,d), maxent(d)."""
    head, args = _parse_call(name)
    if head == "zero" and not args:
        return ops.basis_ket(0, 2)
    if head == "one" and not args:
        return ops.basis_ket(1, 2)
    if head == "plus" and not args:
        return ops.plus_ket()
    if head == "minus" and not args:
        return ops.minus_ket()
    if head == "basis":
        i, d = _ints(args, 2, name)
        if not i < d:
            raise ValidationError(f"{name}: index must be below the dimension")
        return ops.basis_ket(i, d)
    if head == "maxent":
        (d,) = _ints(args, 1, name)
        if d < 1:
            raise ValidationError(f"{name}: dimension must be positive")
        return ops.maximally_entangled(d)
    return None


def builtin_state(name):
    """Mixed-state builtins in addition to the pure ones: maxmixed(d), diag(p, ...)."""
    psi = builtin_pure(name)
    if psi is not None:
        return ops.pure_to_density(psi)
    head, args = _parse_call(name)
    if head == "maxmixed":
        (d,) = _ints(args, 1, name)
        if d < 1:
            raise ValidationError(f"{name}: dimension must be positive")
        return ops.maximally_mixed(d)
    if head == "diag" and args:
        try:
            p = np.array([float(a) for a in args])
        except ValueError:
            raise ValidationError(f"{name}: diagonal entries must be numbers")
        return ops.validate_density(np.diag(p).astype(complex), name)
    return None


def builtin_channel(name):
    """Channel builtins: depolarizing(d), identity(d), pauli-x, pauli-z."""
    head, args = _parse_call(name)
    if head == "depolarizing":
        (d,) = _ints(args, 1, name)
        if d < 2:
            raise ValidationError(f"{name}: dimension must be at least 2")
        return depolarizing_channel(d)
    if head == "identity":
        (d,) = _ints(args, 1, name)
        if d < 1:
            raise ValidationError(f"{name}: dimension must be positive")
        return identity_channel(d)
    if head == "pauli-x" and not args:
        return unitary_channel([[0, 1], [1, 0]], name)
    if head == "pauli-z" and not args:
        return unitary_channel([[1, 0], [0, -1]], name)
    return None


def resolve_state(name, problem=None):
    if problem is not None:
        if name in problem.states:
            return problem.states[name]
        if name in problem.pure_states:
            return ops.pure_to_density(problem.pure_states[name])
    rho = builtin_state(name)
    if rho is None:
        raise ValidationError(f"unknown state name {name!r}")
    return rho


def resolve_pure(name, problem=None):
    if problem is not None:
        if name in problem.pure_states:
            return problem.pure_states[name]
        if name in problem.states:
            raise ValidationError(f"state {name!r} is given as a density operator, not a pure state")
    psi = builtin_pure(name)
    if psi is None:
        raise ValidationError(f"unknown pure state name {name!r}")
    return psi


def resolve_channel(name, problem=None):
    if problem is not None and name in problem.channels:
        return problem.channels[name]
    ch = builtin_channel(name)
    if ch is None:
        raise ValidationError(f"unknown channel name {name!r}")
    return ch
