/** Wire types, mirroring the backend's canonical JSON schema. */

export interface Placement {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface Widget {
  id: string;
  title: string;
  value: string;
  suggestedValues: string[];
  savedValues: string[];
  origin: "SystemSuggested" | "ThemedPrompt" | "Manual";
  placement: Placement | null;
  isNew: boolean;
  createdAt: number;
}

export interface HistoryEntry {
  id: string;
  text: string;
  cause: "UserEdit" | "Generation" | "Rephrase" | "Revert";
  promptUsed: string | null;
  activeWidgetSnapshot: [string, string][] | null;
  timestamp: number;
}

export interface DocumentState {
  text: string;
  wordCount: number;
  history: HistoryEntry[];
}

export interface Canvas {
  id: string;
  name: string;
  widgets: Widget[];
  document: DocumentState;
  viewport: { panX: number; panY: number; zoom: number };
  createdAt: number;
}

export interface ChatMessage {
  role: "user" | "assistant";
  content: string;
  createdAt: number;
  error: string | null;
}

export interface ChatSession {
  id: string;
  title: string;
  messages: ChatMessage[];
  createdAt: number;
}

export interface StreamEvent {
  jobId?: string;
  chunk?: string;
  done?: boolean;
  finalText?: string;
  cancelled?: boolean;
  error?: string;
  detail?: string;
}
