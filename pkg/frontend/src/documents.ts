/** Validation of service documents and their normalization into the
 * client view model.  A document that fails validation raises
 * DocumentError whose message is shown in the error banner. */

import { z } from "zod";

import type {
  ErrorDocument,
  SessionDocument,
  StatusDocument,
  ViewDocument,
  ViewModel,
} from "./types.js";

export class DocumentError extends Error {
  override name = "DocumentError";
}

const viewNodeSchema = z.object({
  id: z.number().int().nonnegative(),
  x: z.number(),
  y: z.number(),
  radius: z.number().positive(),
  size: z.number().int().positive(),
  refinable: z.boolean(),
  coarsenable: z.boolean(),
  color: z.number().nullable(),
});

const viewEdgeSchema = z.object({
  source: z.number().int().nonnegative(),
  target: z.number().int().nonnegative(),
  weight: z.number().int().positive(),
});

const statBlockSchema = z.object({
  attribute: z.string(),
  mode: z.enum(["p", "residual"]),
  category: z.string().nullable(),
  scale: z.enum(["gray-sequential", "red-blue-diverging"]),
});

const viewDocumentSchema = z.object({
  nodes: z.array(viewNodeSchema),
  edges: z.array(viewEdgeSchema),
  q: z.number(),
  threshold: z.number(),
  no_structure: z.boolean(),
  stat: statBlockSchema.nullable(),
  bounds: z.tuple([z.number(), z.number(), z.number(), z.number()]),
});

const statusDocumentSchema = z.object({
  id: z.string(),
  state: z.enum(["building", "ready", "error"]),
  n: z.number().int().nonnegative(),
  m: z.number().int().nonnegative(),
  error: z.string().optional(),
  clusters: z.number().int().positive().optional(),
  q: z.number().optional(),
  threshold: z.number().optional(),
  p: z.number().optional(),
  no_structure: z.boolean().optional(),
});

const sessionDocumentSchema = z.object({
  id: z.string(),
  status: z.enum(["building", "ready", "error"]),
});

const errorDocumentSchema = z.object({
  error: z.object({ reason: z.string(), detail: z.string() }),
});

function parseWith<T>(schema: z.ZodType<T>, raw: unknown, what: string): T {
  const result = schema.safeParse(raw);
  if (!result.success) {
    const issue = result.error.issues[0];
    const where = issue && issue.path.length ? ` at ${issue.path.join(".")}` : "";
    const why = issue ? issue.message : "invalid document";
    throw new DocumentError(`${what} does not match the service schema${where}: ${why}`);
  }
  return result.data;
}

export function parseViewDocument(raw: unknown): ViewDocument {
  const doc = parseWith(viewDocumentSchema, raw, "view document");
  const seen = new Set<number>();
  for (const node of doc.nodes) {
    if (seen.has(node.id)) {
      throw new DocumentError(`view document repeats node id ${node.id}`);
    }
    seen.add(node.id);
  }
  for (const edge of doc.edges) {
    if (!seen.has(edge.source) || !seen.has(edge.target)) {
      throw new DocumentError(
        `view document edge ${edge.source}-${edge.target} references a missing node`,
      );
    }
  }
  const [x0, y0, x1, y1] = doc.bounds;
  if (!(x1 > x0) || !(y1 > y0)) {
    throw new DocumentError("view document bounds are empty");
  }
  return doc;
}

export function parseStatusDocument(raw: unknown): StatusDocument {
  return parseWith(statusDocumentSchema, raw, "status document");
}

export function parseSessionDocument(raw: unknown): SessionDocument {
  return parseWith(sessionDocumentSchema, raw, "session document");
}

export function parseErrorDocument(raw: unknown): ErrorDocument {
  return parseWith(errorDocumentSchema, raw, "error document");
}

/** Normalize a validated view document into the render input. */
export function toViewModel(doc: ViewDocument): ViewModel {
  return {
    nodes: doc.nodes,
    edges: doc.edges,
    q: doc.q,
    threshold: doc.threshold,
    noStructure: doc.no_structure,
    statMode: doc.stat ? doc.stat.mode : null,
    attribute: doc.stat ? doc.stat.attribute : null,
    category: doc.stat ? doc.stat.category : null,
    scale: doc.stat ? doc.stat.scale : null,
    bounds: doc.bounds,
  };
}
