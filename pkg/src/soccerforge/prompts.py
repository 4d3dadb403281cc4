"""Prompt construction for description and QA generation.

The long-description and detail-QA system templates are fixed text;
builders only interpolate the per-clip slots (event description, jersey
colors, captions, commentary). The overview template is our own wording:
it requests a single high-level question about the overall flow,
strategic developments, or key moments within a clip, and forbids
timestamp questions. All builders are deterministic: identical inputs
produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .fusion import FusedClip
from .pairing import EventPair


class Role(Enum):
    SYSTEM = "system"
    USER = "user"


@dataclass(frozen=True)
class Message:
    role: Role
    content: str


@dataclass(frozen=True)
class PromptMessages:
    """Ordered chat messages; the first is always the system message."""

    messages: tuple[Message, ...]

    def __post_init__(self):
        if not self.messages:
            raise ValueError("PromptMessages must be non-empty")
        if self.messages[0].role is not Role.SYSTEM:
            raise ValueError("first message must have the System role")

    def to_payload(self) -> list[dict]:
        return [{"role": m.role.value, "content": m.content} for m in self.messages]


LONG_DESCRIPTION_SYSTEM = (
    "You will play two roles: a human asking questions related to describing a "
    "short soccer video clip and an intelligent chatbot designed for video "
    "description, storytelling and captioning. Your task is to generate a "
    "detailed and descriptive paragraph based on the provided fragmented "
    "information about a short video clip. "
    "##TASK:"
    "Users will provide event description, supporting caption and commentary of "
    "a clip, and you will generate ONE conversation-like question and answer "
    "related to describing the video and the game event in detail. The question "
    "should ask to describe the video content in detail. The answer should be a "
    "paraphrased and well-structured paragraph based on the provided "
    "description, with a minimum of 250 words and a maximum of 300 words. "
    "##INSTRUCTIONS:"
    "- The question must be like a human conversation and focused on describing "
    "the video and event in detail. "
    "- Reject the information in supporting commentary and caption if not "
    "relevant and logical to the event visible in the clip. "
    "- The answer must be a paraphrased version of the provided information, "
    "very detailed and descriptive, and within the specified word count. "
    "- Act as if you are really seeing the visual content live and have no "
    "access to the commentary and caption. Don't mention about 'commentary' and "
    "'caption' in the answer. "
    "- Only use the supporting commentary and caption to be smart enough to "
    "interpret the visual content, faking as though you got the information "
    "from the video itself."
    "- Avoid mentioning actual player names and team names from the commentary "
    "as it is not visible in video; instead, refer to them by jersey-color if "
    "possible, else ignore the information."
    "- Begin answers with creative opening."
)

LONG_DESCRIPTION_USER = (
    "The fragmented information: {game_details}. Please generate the response "
    "in the form of a Python JSON dictionary string with keys 'Q' for question "
    "and 'A' for answer. Each corresponding value should be the question and "
    "answer text respectively. "
    "For example, your response should look like this: "
    "{{'Q': 'Your question here...', 'A': 'Your answer here...'}}. Emphasize "
    "that the answer should focus on describing the video content as detailed "
    "as possible."
)

DETAIL_QA_SYSTEM = (
    "You play two roles: a human asking questions related to a short soccer "
    "video clip and an intelligent chatbot designed to help people understand "
    "specific events within the clip. "
    "Your task is to focus on soccer video summarization, which will be "
    "utilized by users to comprehend key moments in soccer matches through "
    "various questions based on the video content. "
    "This summarization will assist in applications like analyzing game "
    "highlights, generating summaries for sports content platforms, creating "
    "brief overviews for coaching analysis, or providing quick updates for "
    "fans. "
    "You will first act as a human inquiring about specific events in a soccer "
    "match and then switch roles to an AI assistant providing detailed "
    "information based on the video's content."
    "------"
    "##TASK:"
    "You will be given a caption of a specific event from a short soccer video "
    "clip. Based on this caption, you will generate a set of "
    "conversational-style questions and answers related to the visible events. "
    "<event_info> "
    "The questions should be crafted to extract information DIRECTLY from the "
    "provided caption, so that it or parts of it can serve as the answers. "
    "Generate THREE different descriptive and conversational style questions "
    "and detailed answers based on the given information."
    "------"
    "##INSTRUCTIONS:"
    "- The questions must be conversational and directly related to the events "
    "in the soccer video clip. "
    "- The questions should be designed to extract information DIRECTLY from "
    "the given caption, so that it or parts of it can serve as the answers. "
    "- The answers must be detailed, descriptive, and should directly reference "
    "the information provided. "
    "- The questions can focus on player actions, game strategies, scoring "
    "opportunities, defensive tactics, or any key moments in the clip. "
    "------"
    "##SAMPLE QUESTIONS (based on given caption and event type):"
    "- How did the player score the goal in the clip?"
    "- What defensive strategy did the team use to prevent the goal?"
    "- Describe the sequence of passes that led to the goal."
    "- Was there an offside violation in the buildup to the goal?"
    "- How did the goalkeeper react to the shot?"
)

DETAIL_QA_USER = (
    "The video caption is: {long_description}. "
    "Please generate the response in the form of a Python JSON, where JSON "
    "strings start with keys 'Q' for question and 'A' for answer. Each "
    "corresponding value should be the question and answer text respectively. "
    "The response should look EXACTLY like this : {{'Q1': 'Your first question "
    "here...', 'A1': 'Your first answer here...', 'Q2': 'Your second question "
    "here...', 'A2': 'Your second answer here...', 'Q3': 'Your third question "
    "here...', 'A3': 'Your third answer here...'}}. "
    "Emphasize that ALL THREE questions must be designed to extract information "
    "DIRECTLY from the given caption, so that it or parts of it can serve as "
    "the answers, and provide detailed and descriptive answers."
)

OVERVIEW_QA_SYSTEM = (
    "You play two roles: a human asking a question about a short soccer video "
    "clip and an intelligent chatbot designed to help people understand the "
    "clip as a whole. "
    "Your task is to provide a high-level synthesis of visible events, "
    "emphasizing the game's broader narrative rather than granular details. "
    "------"
    "##TASK:"
    "You will be given a description of a short soccer video clip. Based on "
    "this description, you will generate ONE conversational-style question and "
    "answer about the clip as a whole. "
    "The question should focus on the overall flow, strategic developments, or "
    "key moments within the clip, and the answer should reflect the general "
    "context. "
    "------"
    "##INSTRUCTIONS:"
    "- The question must be conversational and high-level; never ask about "
    "exact timestamps, clock times, or match minutes. "
    "- The answer must be a short, well-formed synthesis of the visible events "
    "grounded in the provided description. "
    "- Do not mention actual player names or team names; refer to teams by "
    "jersey color if needed."
)

OVERVIEW_QA_USER = (
    "The video description is: {long_description}. "
    "Please generate the response in the form of a Python JSON dictionary "
    "string with keys 'Q' for question and 'A' for answer. Each corresponding "
    "value should be the question and answer text respectively. "
    "For example, your response should look like this: "
    "{{'Q': 'Your question here...', 'A': 'Your answer here...'}}."
)

GAME_DETAILS_TEMPLATE = (
    "Video Clip:\n"
    "{event_sentence}\n"
    "-----\n"
    "Possible Supporting Caption:\n"
    "{captions}\n"
    "-----\n"
    "Possible Supporting Commentary:\n"
    "{commentary}"
)

EMPTY_SLOT = "(none)"


def describe_events(fused: FusedClip) -> str:
    """The event slot: a single label, or both labels and the gap."""
    clip = fused.clip
    if isinstance(clip, EventPair):
        gap_s = clip.gap_ms / 1000
        return f"{clip.first.label} followed {gap_s:g} seconds later by {clip.second.label}"
    return clip.anchor_event.label


def _event_sentence(fused: FusedClip) -> str:
    events = describe_events(fused)
    clip = fused.clip
    team = clip.first.team if isinstance(clip, EventPair) else clip.anchor_event.team
    color = fused.jerseys.for_team(team)
    home = fused.jerseys.home_color
    away = fused.jerseys.away_color
    if color is not None:
        return (
            f"shows only {events} event by {color}-jerseyed team in the match "
            f"between teams in {home} vs {away} jerseys."
        )
    return (
        f"shows only {events} event in the match between teams in {home} vs "
        f"{away} jerseys."
    )


def render_game_details(fused: FusedClip) -> str:
    captions = "\n".join(fused.captions) if fused.captions else EMPTY_SLOT
    commentary = fused.commentary if fused.commentary else EMPTY_SLOT
    return GAME_DETAILS_TEMPLATE.format(
        event_sentence=_event_sentence(fused),
        captions=captions,
        commentary=commentary,
    )


def build_long_description_prompt(fused: FusedClip) -> PromptMessages:
    """Prompt for the 250-300 word clip description (one Q/A dict reply)."""
    if not fused.captions:
        raise ValueError("long-description prompts need at least one caption")
    user = LONG_DESCRIPTION_USER.format(game_details=render_game_details(fused))
    return PromptMessages(
        (
            Message(Role.SYSTEM, LONG_DESCRIPTION_SYSTEM),
            Message(Role.USER, user),
        )
    )


def build_detail_qa_prompt(long_description: str, event_info: str) -> PromptMessages:
    """Prompt for three detail QAs grounded in a long description."""
    if not long_description:
        raise ValueError("long_description must be non-empty")
    if event_info:
        system = DETAIL_QA_SYSTEM.replace("<event_info>", event_info)
    else:
        system = DETAIL_QA_SYSTEM.replace("<event_info> ", "")
    user = DETAIL_QA_USER.format(long_description=long_description)
    return PromptMessages(
        (Message(Role.SYSTEM, system), Message(Role.USER, user))
    )


def build_overview_qa_prompt(long_description: str) -> PromptMessages:
    """Prompt for one high-level QA about the clip's overall narrative."""
    if not long_description:
        raise ValueError("long_description must be non-empty")
    user = OVERVIEW_QA_USER.format(long_description=long_description)
    return PromptMessages(
        (Message(Role.SYSTEM, OVERVIEW_QA_SYSTEM), Message(Role.USER, user))
    )
