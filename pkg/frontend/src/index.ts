export { frameFromColumns, frameFromCsvText, checkFrame, FrameError } from "./dataframe";
export type { Cell, DataFrame } from "./dataframe";
export { frameToCsv } from "./csv";
export { EngineClient, EngineError } from "./engine";
export type { EngineResult } from "./engine";
export { SkinSession } from "./session";
export type { CheckedOutput, SkinOptions, TabulateOptions } from "./session";
