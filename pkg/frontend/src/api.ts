import type {
  Graph,
  LayoutMode,
  LayoutRequestBody,
  LayoutResponse,
  Point,
} from "./types.js";

export interface RequestInputs {
  graph: Graph;
  sketchBase64: string;
  mode: LayoutMode;
  selection: string[];
  prior: Record<string, Point>;
  config?: Record<string, number | boolean>;
}

/** Shape the JSON body; incremental mode carries selection and prior. */
export function buildLayoutRequest(inputs: RequestInputs): LayoutRequestBody {
  const body: LayoutRequestBody = {
    graph: inputs.graph,
    sketch: inputs.sketchBase64,
    mode: inputs.mode,
  };
  if (inputs.config && Object.keys(inputs.config).length) {
    body.config = inputs.config;
  }
  if (inputs.mode === "incremental") {
    body.selection = [...inputs.selection].sort();
    body.prior = inputs.prior;
  }
  return body;
}

export async function postLayout(
  baseUrl: string,
  body: LayoutRequestBody,
): Promise<LayoutResponse> {
  const response = await fetch(`${baseUrl}/api/layout`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    let message = `server returned ${response.status}`;
    try {
      const data = (await response.json()) as { error?: string };
      if (data.error) message = data.error;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new Error(message);
  }
  return (await response.json()) as LayoutResponse;
}
