"""User profiles derived from hashtags: ingestion and word extraction."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from tagrec.corpus import BigramModel, Lexicon
from tagrec.errors import InputError, ParseError, ResourceError
from tagrec.segmenter import DEFAULT_MAX_CANDIDATES, Hashtag, SegmentStatus, segment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Profile:
    """A user id, their raw hashtags, and the extracted word set."""

    id: str
    hashtags: tuple[str, ...] = ()
    words: frozenset[str] = frozenset()
    n_unsegmentable: int = 0
    n_invalid: int = 0


def ingest_profiles(path) -> list[tuple[str, list[str]]]:
    """Read a users TSV of ``id<TAB>tag1,tag2,...`` rows.

    Repeated ids are merged in order of appearance; an empty tag field
    yields an empty hashtag list.
    """
    order: list[str] = []
    tags_by_id: dict[str, list[str]] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(path, line_no, f"expected 2 tab-separated fields, got {len(parts)}")
                user_id, tag_field = parts[0].strip(), parts[1]
                if not user_id:
                    raise ParseError(path, line_no, "empty user id")
                tags = [t.strip() for t in tag_field.split(",") if t.strip()]
                if user_id not in tags_by_id:
                    order.append(user_id)
                    tags_by_id[user_id] = []
                tags_by_id[user_id].extend(tags)
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError(f"cannot read users file {path}: {exc}") from exc
    return [(user_id, tags_by_id[user_id]) for user_id in order]


def build_profile(
    user_id: str,
    hashtags,
    lexicon: Lexicon,
    bigrams: BigramModel,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> Profile:
    """Segment every hashtag and collect the resulting words.

    Hashtags that fail normalization (digits, punctuation, non-ASCII) or
    that no lexicon path covers contribute nothing; both cases are
    counted on the returned profile.
    """
    words: set[str] = set()
    n_unsegmentable = 0
    n_invalid = 0
    for raw in hashtags:
        try:
            tag = Hashtag.parse(raw)
        except InputError:
            n_invalid += 1
            continue
        result = segment(tag, lexicon, bigrams, max_candidates)
        if result.status is SegmentStatus.UNSEGMENTABLE:
            n_unsegmentable += 1
        else:
            words.update(result.tokens)
    return Profile(
        id=user_id,
        hashtags=tuple(hashtags),
        words=frozenset(words),
        n_unsegmentable=n_unsegmentable,
        n_invalid=n_invalid,
    )


def build_profiles(pairs, lexicon: Lexicon, bigrams: BigramModel) -> list[Profile]:
    """Build profiles for every ``(id, hashtags)`` pair, logging totals."""
    profiles = [build_profile(user_id, tags, lexicon, bigrams) for user_id, tags in pairs]
    skipped = sum(p.n_unsegmentable + p.n_invalid for p in profiles)
    if skipped:
        logger.info("profiles: %d hashtags contributed no words", skipped)
    return profiles
