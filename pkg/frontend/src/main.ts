// Page wiring: session bootstrap, typed input, mic toggle, event stream.

import { ServiceClient, ServiceError, type StageEvent } from './api.js';
import { createCaptureLoop, speechSupported, type CaptureLoop } from './speech.js';
import { applyStageEvent, beginTurn, completeTurn, failTurn, initialState } from './state.js';
import { renderAll, type Panels } from './ui.js';

const RECONNECT_DELAY_MS = 1000;

function mustFind(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  // same-origin by default; ?api=http://host:port points elsewhere
  const override = new URLSearchParams(location.search).get('api');
  const client = new ServiceClient((override ?? location.origin).replace(/\/$/, ''));
  const state = initialState();
  const panels: Panels = {
    chat: mustFind('chat'),
    scene: mustFind('scene'),
    connection: mustFind('connection'),
  };
  const form = mustFind('utterance-form') as HTMLFormElement;
  const input = mustFind('utterance-input') as HTMLInputElement;
  const send = mustFind('utterance-send') as HTMLButtonElement;
  const mic = mustFind('mic-toggle') as HTMLButtonElement;

  const repaint = () => {
    renderAll(panels, state);
    send.disabled = state.inFlight || input.value.trim() === '';
    input.disabled = state.inFlight;
    mic.textContent = state.listening ? 'mic on' : 'mic off';
    mic.classList.toggle('listening', state.listening);
  };

  state.sessionId = await client.createSession();
  state.scene = await client.getScene(state.sessionId);
  state.connection = 'connected';

  const submit = async (text: string) => {
    const trimmed = text.trim();
    if (!trimmed || state.inFlight || !state.sessionId) return;
    const turn = beginTurn(state, trimmed);
    repaint();
    try {
      const doc = await client.sendUtterance(state.sessionId, trimmed);
      completeTurn(state, turn, doc);
      state.scene = await client.getScene(state.sessionId);
    } catch (err) {
      if (err instanceof ServiceError) {
        failTurn(state, turn, `${err.doc.code}: ${err.doc.message}`);
      } else {
        failTurn(state, turn, String(err));
      }
    }
    repaint();
  };

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const text = input.value;
    input.value = '';
    void submit(text);
  });
  input.addEventListener('input', repaint);

  // speech is optional; the typed path must carry everything without it
  let capture: CaptureLoop | null = null;
  if (speechSupported()) {
    capture = createCaptureLoop((text) => void submit(text));
    mic.addEventListener('click', () => {
      if (state.listening) {
        capture!.stop();
        state.listening = false;
      } else {
        capture!.start();
        state.listening = true;
      }
      repaint();
    });
  } else {
    mic.hidden = true;
  }

  const connectEvents = () => {
    if (!state.sessionId) return;
    const socket = new WebSocket(client.eventsUrl(state.sessionId));
    socket.onopen = () => {
      state.connection = 'connected';
      repaint();
    };
    socket.onmessage = (message) => {
      applyStageEvent(state, JSON.parse(message.data as string) as StageEvent);
      repaint();
    };
    socket.onclose = () => {
      state.connection = 'reconnecting';
      repaint();
      setTimeout(async () => {
        // resync: the snapshot is authoritative after a gap
        if (state.sessionId) state.scene = await client.getScene(state.sessionId);
        connectEvents();
      }, RECONNECT_DELAY_MS);
    };
  };
  connectEvents();
  repaint();
}

void boot();
