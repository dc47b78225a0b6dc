export { ApiClient, ServiceError } from "./client.js";
export type { FetchLike, SessionUpload, StatRequest } from "./client.js";
export {
  DocumentError,
  parseErrorDocument,
  parseSessionDocument,
  parseStatusDocument,
  parseViewDocument,
  toViewModel,
} from "./documents.js";
export {
  Explorer,
  NOT_IN_VIEW_REASON,
  PENDING_REASON,
  sceneFromDocument,
} from "./controller.js";
export type { MoveOutcome, SceneChange, SurfacedError } from "./controller.js";
export { mountExplorer } from "./mount.js";
export {
  CIRCLE_STROKE,
  GRAY_DECADES,
  NEUTRAL_FILL,
  RESIDUAL_LIMIT,
  applyTransform,
  edgeWidth,
  fillFor,
  graySequential,
  redBlueDiverging,
  viewTransform,
} from "./scale.js";
export {
  TERMINAL_TOOLTIP,
  buildScene,
  interpolateScene,
  sceneToSvg,
  transitionFrames,
} from "./scene.js";
export type {
  ErrorDocument,
  Scene,
  SceneCircle,
  SceneSegment,
  SessionDocument,
  StatBlock,
  StatMode,
  StatusDocument,
  ScaleName,
  ViewDocument,
  ViewEdge,
  ViewModel,
  ViewNode,
  Viewport,
} from "./types.js";
