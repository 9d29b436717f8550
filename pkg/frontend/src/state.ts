// Single mutable UI state; rendering reads it whole after every change.

import type { ErrorDoc, SceneDoc, StageEvent, UtteranceDoc } from './api.js';

export interface ChatTurn {
  userText: string;
  normalizedText: string | null;
  scriptText: string | null;
  statements: string[];
  comments: string[];
  responses: string[];
  error: ErrorDoc | null;
  pending: boolean;
  failed: boolean;
}

export type Connection = 'connected' | 'reconnecting';

export interface UiState {
  sessionId: string | null;
  listening: boolean;
  connection: Connection;
  chat: ChatTurn[];
  scene: SceneDoc | null;
  inFlight: boolean;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    listening: false,
    connection: 'reconnecting',
    chat: [],
    scene: null,
    inFlight: false,
  };
}

export function beginTurn(state: UiState, userText: string): ChatTurn {
  const turn: ChatTurn = {
    userText,
    normalizedText: null,
    scriptText: null,
    statements: [],
    comments: [],
    responses: [],
    error: null,
    pending: true,
    failed: false,
  };
  state.chat.push(turn);
  state.inFlight = true;
  return turn;
}

export function completeTurn(state: UiState, turn: ChatTurn, doc: UtteranceDoc): void {
  turn.normalizedText = doc.normalizedText;
  turn.scriptText = doc.rawScript;
  turn.statements = doc.statements;
  turn.comments = doc.comments;
  turn.responses = doc.responses;
  turn.error = doc.error;
  turn.pending = false;
  state.inFlight = false;
}

export function failTurn(state: UiState, turn: ChatTurn, message: string): void {
  turn.failed = true;
  turn.pending = false;
  turn.error = { code: 'transport', message, detail: {} };
  state.inFlight = false;
}

// Stage events fill the same turn the POST answers for; order is the
// pipeline's (transcript -> normalized -> script -> executed).
export function applyStageEvent(state: UiState, event: StageEvent): void {
  const turn = state.chat.length ? state.chat[state.chat.length - 1] : null;
  if (!turn || !turn.pending) return;
  if (event.stage === 'normalized') {
    turn.normalizedText = String(event.payload.text ?? '');
  } else if (event.stage === 'script') {
    turn.scriptText = String(event.payload.raw ?? '');
    turn.statements = (event.payload.statements as string[]) ?? [];
  } else if (event.stage === 'executed') {
    turn.responses = (event.payload.responses as string[]) ?? [];
  }
}
