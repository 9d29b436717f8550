// DOM rendering. Every function takes its target element so tests can run
// against any document. Server text always lands via textContent.

import type { SceneDoc } from './api.js';
import type { ChatTurn, UiState } from './state.js';

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

// The script block's textContent must equal rawScript byte for byte; comment
// lines get a class for styling but their text is untouched.
export function renderScript(target: HTMLElement, rawScript: string): void {
  const doc = target.ownerDocument;
  target.textContent = '';
  const lines = rawScript.split('\n');
  lines.forEach((line, i) => {
    const kind = line.trimStart().startsWith('//') ? 'line comment' : 'line code';
    target.appendChild(el(doc, 'span', kind, line));
    if (i < lines.length - 1) target.appendChild(doc.createTextNode('\n'));
  });
}

export function renderTurn(doc: Document, turn: ChatTurn): HTMLElement {
  const root = el(doc, 'li', turn.failed ? 'turn failed' : turn.pending ? 'turn pending' : 'turn');
  root.appendChild(el(doc, 'div', 'user-text', turn.userText));
  if (turn.normalizedText !== null && turn.normalizedText !== turn.userText) {
    root.appendChild(el(doc, 'div', 'normalized', `heard as: ${turn.normalizedText}`));
  }
  if (turn.scriptText !== null) {
    const script = el(doc, 'pre', 'script');
    renderScript(script, turn.scriptText);
    root.appendChild(script);
  }
  for (const line of turn.responses) {
    const muted = turn.comments.includes(line);
    root.appendChild(el(doc, 'div', muted ? 'response explanation' : 'response', line));
  }
  if (turn.error) {
    root.appendChild(el(doc, 'div', 'error', `${turn.error.code}: ${turn.error.message}`));
  }
  return root;
}

export function renderChat(target: HTMLElement, state: UiState): void {
  target.textContent = '';
  for (const turn of state.chat) target.appendChild(renderTurn(target.ownerDocument, turn));
}

export function renderScene(target: HTMLElement, scene: SceneDoc | null): void {
  const doc = target.ownerDocument;
  target.textContent = '';
  if (!scene) {
    target.appendChild(el(doc, 'div', 'empty', 'no scene'));
    return;
  }
  target.appendChild(el(doc, 'div', 'title', `${scene.title} (${scene.atomCount} atoms)`));
  const sim = scene.sim;
  target.appendChild(
    el(
      doc,
      'div',
      'sim',
      `simulation: ${sim.running ? 'running' : 'stopped'} · T=${sim.temperature} · rate=${sim.updateRate}`
    )
  );
  target.appendChild(el(doc, 'div', 'view', `zoom ×${scene.view.zoomFactor} · ${scene.selectionSize} selected`));
  const table = el(doc, 'table', 'reps');
  for (const group of scene.repSummary) {
    const row = el(doc, 'tr', 'rep');
    row.appendChild(el(doc, 'td', 'chain', group.chain));
    row.appendChild(el(doc, 'td', 'resname', group.resname));
    row.appendChild(el(doc, 'td', 'count', String(group.atomCount)));
    row.appendChild(el(doc, 'td', 'colors', group.colors.join(' ')));
    row.appendChild(el(doc, 'td', 'radii', `sf ${group.spacefillRadii.join('/')} · st ${group.sticksRadii.join('/')}`));
    table.appendChild(row);
  }
  target.appendChild(table);
}

export function renderConnection(target: HTMLElement, state: UiState): void {
  target.textContent = state.connection;
  target.className = `connection ${state.connection}`;
}

export interface Panels {
  chat: HTMLElement;
  scene: HTMLElement;
  connection: HTMLElement;
}

export function renderAll(panels: Panels, state: UiState): void {
  renderChat(panels.chat, state);
  renderScene(panels.scene, state.scene);
  renderConnection(panels.connection, state);
}
