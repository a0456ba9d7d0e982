export * from "./types";
export * from "./colors";
export * from "./sse";
export * from "./api";
export * from "./state";
export * from "./views/planOutline";
export * from "./views/agentBoard";
export * from "./views/taskProcess";
export * from "./views/exploration";
export * from "./views/execution";
