// Typed client for the molvoice service. Documents mirror docs/api.md in
// the engine repo; nothing here rewrites server text.

export interface ErrorDoc {
  code: string;
  message: string;
  detail: Record<string, unknown>;
}

export interface UtteranceDoc {
  normalizedText: string;
  rawScript: string;
  statements: string[];
  comments: string[];
  responses: string[];
  sceneDiff: Record<string, unknown>;
  responseVolume: string;
  error: ErrorDoc | null;
}

export interface RepGroup {
  chain: string;
  resname: string;
  atomCount: number;
  colors: string[];
  spacefillRadii: number[];
  sticksRadii: number[];
}

export interface SceneDoc {
  atomCount: number;
  title: string;
  sim: { temperature: number; updateRate: number; running: boolean };
  view: { zoomFactor: number };
  selectionSize: number;
  repSummary: RepGroup[];
}

export interface StageEvent {
  stage: 'transcript' | 'normalized' | 'script' | 'executed';
  payload: Record<string, unknown>;
}

export class ServiceError extends Error {
  constructor(public doc: ErrorDoc, public status: number) {
    super(doc.message);
  }
}

async function expectOk(response: Response): Promise<Response> {
  if (response.ok) return response;
  let doc: ErrorDoc = { code: 'http_error', message: response.statusText, detail: {} };
  try {
    doc = (await response.json()) as ErrorDoc;
  } catch {
    // non-JSON error body; keep the fallback doc
  }
  throw new ServiceError(doc, response.status);
}

export class ServiceClient {
  constructor(private baseUrl: string) {}

  async createSession(pdbText?: string): Promise<string> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/sessions`, { method: 'POST', body: pdbText ?? '' })
    );
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  async sendUtterance(sessionId: string, text: string): Promise<UtteranceDoc> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/utterance`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ text }),
      })
    );
    return (await response.json()) as UtteranceDoc;
  }

  async getScene(sessionId: string): Promise<SceneDoc> {
    const response = await expectOk(await fetch(`${this.baseUrl}/sessions/${sessionId}/scene`));
    return (await response.json()) as SceneDoc;
  }

  async getPdb(sessionId: string): Promise<string> {
    const response = await expectOk(await fetch(`${this.baseUrl}/sessions/${sessionId}/pdb`));
    return response.text();
  }

  eventsUrl(sessionId: string): string {
    return `${this.baseUrl.replace(/^http/, 'ws')}/sessions/${sessionId}/events`;
  }
}
