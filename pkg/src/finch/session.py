"""Server-held exploration state with atomic mutation and replayable commands.

A session owns a dataset reference, a resolved target, the explained
instance, the subset chain, and display options.  Commands build a complete
new state and swap it in under a lock, so concurrent readers always see a
fully old or fully new state.  Payload bytes are cached per state version:
two reads without an intervening mutation are byte-identical.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import asdict, dataclass, fields, replace

from .config import DEFAULT_CONFIG, EngineConfig
from .effects import rank_next_features
from .errors import (
    ChainError,
    DatasetNotFoundError,
    SessionNotFoundError,
    ViewUnavailableError,
)
from .payload import ViewOptions, build_view_payload, dump_payload, ranking_payload
from .subsets import SubsetChain, extend_chain, new_chain, pop_chain
from .tabular import (
    Dataset,
    InstanceVector,
    ResolvedTarget,
    TargetSpec,
    impute_instance,
    instance_from_row,
    resolve_target,
)

COMMANDS = ("set_x_feature", "add_feature", "remove_last", "set_instance", "set_view")


@dataclass(frozen=True)
class SessionState:
    dataset_id: str
    target: ResolvedTarget
    instance: InstanceVector
    chain: SubsetChain | None  # None until an x feature is chosen
    view: ViewOptions


class Session:
    def __init__(self, session_id: str, state: SessionState, config: EngineConfig):
        self.id = session_id
        self.config = config
        self._state = state
        self._lock = threading.Lock()
        self._version = 0
        self._curve_cache: dict = {}
        self._payload_cache: tuple[int, bytes] | None = None

    @property
    def state(self) -> SessionState:
        return self._state

    def swap(self, new_state: SessionState) -> None:
        with self._lock:
            self._state = new_state
            self._version += 1

    def snapshot(self) -> tuple[int, SessionState]:
        with self._lock:
            return self._version, self._state


def make_instance(ds: Dataset, instance_spec: dict | None) -> InstanceVector:
    """``{"row": i}`` uses a dataset row; ``{"values": {...}}`` imputes gaps;
    omitted or empty means every feature imputed with its mean."""
    spec = instance_spec or {}
    if "row" in spec and spec["row"] is not None:
        return instance_from_row(ds, int(spec["row"]))
    values = spec.get("values") or {}
    return impute_instance({str(k): float(v) for k, v in values.items()}, ds)


class SessionStore:
    """In-memory datasets and sessions; nothing survives the process."""

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or DEFAULT_CONFIG
        self._datasets: dict[str, Dataset] = {}
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def add_dataset(self, ds: Dataset, dataset_id: str | None = None) -> str:
        dataset_id = dataset_id or uuid.uuid4().hex[:12]
        with self._lock:
            self._datasets[dataset_id] = ds
        return dataset_id

    def dataset(self, dataset_id: str) -> Dataset:
        try:
            return self._datasets[dataset_id]
        except KeyError:
            raise DatasetNotFoundError(
                f"unknown dataset {dataset_id!r}",
                detail={"dataset_id": dataset_id, "known": sorted(self._datasets)},
            ) from None

    def dataset_ids(self) -> list[str]:
        return sorted(self._datasets)

    def session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFoundError(
                f"unknown session {session_id!r}", detail={"session_id": session_id}
            ) from None

    def create_session(
        self,
        dataset_id: str,
        target_spec: TargetSpec,
        instance_spec: dict | None = None,
    ) -> Session:
        ds = self.dataset(dataset_id)
        target = resolve_target(ds, target_spec)
        instance = make_instance(ds, instance_spec)
        state = SessionState(
            dataset_id=dataset_id,
            target=target,
            instance=instance,
            chain=None,
            view=ViewOptions(),
        )
        session = Session(uuid.uuid4().hex[:16], state, self.config)
        with self._lock:
            self._sessions[session.id] = session
        return session

    # -- commands ---------------------------------------------------------

    def mutate_session(self, session_id: str, command: str, args: dict | None = None) -> dict:
        """Apply one command atomically and return a state summary."""
        session = self.session(session_id)
        args = args or {}
        ds = self.dataset(session.state.dataset_id)
        state = session.state

        if command == "set_x_feature":
            chain = new_chain(ds, str(args["feature"]), state.instance, session.config)
            new_state = replace(state, chain=chain)
        elif command == "add_feature":
            if state.chain is None:
                raise ChainError("select an x-axis feature before adding conditioning features")
            new_state = replace(state, chain=extend_chain(state.chain, str(args["feature"])))
        elif command == "remove_last":
            if state.chain is None:
                raise ChainError("no chain to remove features from")
            new_state = replace(state, chain=pop_chain(state.chain))
        elif command == "set_instance":
            instance = make_instance(ds, args)
            chain = state.chain
            if chain is not None:
                rebuilt = new_chain(ds, chain.x_feature, instance, session.config)
                for feat in chain.conditioning_features:
                    rebuilt = extend_chain(rebuilt, feat)
                chain = rebuilt
            new_state = replace(state, instance=instance, chain=chain)
        elif command == "set_view":
            known = {f.name for f in fields(ViewOptions)}
            unknown = sorted(set(args) - known)
            if unknown:
                raise ViewUnavailableError(
                    f"unknown view options {unknown}; known options: {sorted(known)}"
                )
            view = replace(state.view, **args)
            view.validated(ds)
            new_state = replace(state, view=view)
        else:
            raise ChainError(
                f"unknown command {command!r}; expected one of {list(COMMANDS)}",
                detail={"command": command},
            )

        session.swap(new_state)
        return self.summary(session_id)

    def summary(self, session_id: str) -> dict:
        session = self.session(session_id)
        state = session.state
        chain = state.chain
        return {
            "session_id": session.id,
            "dataset_id": state.dataset_id,
            "x_feature": chain.x_feature if chain else None,
            "conditioning_features": list(chain.conditioning_features) if chain else [],
            "subset_sizes": [step.size for step in chain.steps] if chain else [],
            "view": asdict(state.view),
            "instance": {
                "provenance": state.instance.provenance,
                "imputed_features": sorted(state.instance.imputed_features),
            },
            "target": {
                "mode": state.target.spec.mode,
                "class_label": state.target.spec.class_label,
                "label": state.target.label,
            },
        }

    # -- reads ------------------------------------------------------------

    def payload_bytes(self, session_id: str) -> bytes:
        """Canonical payload for the current state, cached per version."""
        session = self.session(session_id)
        version, state = session.snapshot()
        cached = session._payload_cache
        if cached is not None and cached[0] == version:
            return cached[1]
        ds = self.dataset(state.dataset_id)
        payload = build_view_payload(
            ds,
            state.target,
            state.chain,
            state.view,
            config=session.config,
            cache=session._curve_cache,
        )
        data = dump_payload(payload)
        session._payload_cache = (version, data)
        return data

    def ranking(self, session_id: str, kind: str | None = None, workers: int | None = None) -> dict:
        session = self.session(session_id)
        _, state = session.snapshot()
        if state.chain is None:
            raise ChainError("select an x-axis feature before ranking candidates")
        ds = self.dataset(state.dataset_id)
        score_kind = kind or state.view.ranking_score_kind
        ranking = rank_next_features(
            ds,
            state.chain,
            state.instance,
            state.target.values,
            score_kind,
            workers=workers,
            config=session.config,
        )
        return ranking_payload(ranking)
