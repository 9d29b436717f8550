// Continuous speech capture on top of the browser's native recognition.
// Chrome's engine stops itself at quiet points, so the loop restarts it
// whenever it ends while we still want to listen; a short fixed backoff
// keeps an immediately-failing engine from spinning.

export type FinalTranscript = (text: string) => void;

export interface CaptureLoop {
  listening(): boolean;
  start(): void;
  stop(): void;
}

export const RESTART_DELAY_MS = 250;

interface RecognitionLike {
  lang: string;
  continuous: boolean;
  interimResults: boolean;
  onresult: ((e: any) => void) | null;
  onend: (() => void) | null;
  onerror: ((e: any) => void) | null;
  start(): void;
  stop(): void;
}

type RecognitionCtor = new () => RecognitionLike;

export function recognitionCtor(scope: any = globalThis): RecognitionCtor | null {
  return scope.SpeechRecognition || scope.webkitSpeechRecognition || null;
}

export function speechSupported(scope: any = globalThis): boolean {
  return recognitionCtor(scope) !== null;
}

export function createCaptureLoop(
  onFinal: FinalTranscript,
  scope: any = globalThis,
  restartDelayMs: number = RESTART_DELAY_MS
): CaptureLoop {
  const Ctor = recognitionCtor(scope);
  if (!Ctor) throw new Error('speech recognition not available');

  let rec: RecognitionLike | null = null;
  let wanted = false; // the user-facing listening toggle
  let timer: ReturnType<typeof setTimeout> | null = null;

  const spinUp = () => {
    if (rec || !wanted) return;
    rec = new Ctor();
    rec.lang = 'en-US';
    rec.continuous = true;
    rec.interimResults = true;

    rec.onresult = (e: any) => {
      // only final results leave the capture loop; interim text never
      // reaches the server
      const result = e.results[e.resultIndex];
      if (result && result.isFinal && result[0]) onFinal(result[0].transcript);
    };

    rec.onerror = () => {
      // onend follows every error; restart decisions live there
    };

    rec.onend = () => {
      rec = null;
      if (!wanted) return;
      if (timer !== null) return; // one restart per end, no pile-up
      timer = setTimeout(() => {
        timer = null;
        spinUp();
      }, restartDelayMs);
    };

    rec.start();
  };

  return {
    listening: () => wanted,
    start: () => {
      wanted = true;
      spinUp();
    },
    stop: () => {
      wanted = false;
      if (timer !== null) {
        clearTimeout(timer);
        timer = null;
      }
      try {
        rec?.stop();
      } catch {
        // engine already gone
      }
      rec = null;
    },
  };
}
