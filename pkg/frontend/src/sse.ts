/**
 * Minimal server-sent-events decoding: an incremental text parser that can
 * be fed arbitrary chunk boundaries, plus an async iterator over a fetch
 * response body. Only the "data:" field is used; the service encodes one
 * JSON document per event.
 */

/**
 * Incremental SSE parser. Feed it decoded text in any chunking and it
 * returns the data payloads of every event completed so far.
 */
export class SseParser {
  private buffer = "";

  /** Consume a chunk of stream text and return completed event payloads. */
  feed(chunk: string): string[] {
    this.buffer += chunk.replace(/\r\n/g, "\n");
    const payloads: string[] = [];
    let boundary = this.buffer.indexOf("\n\n");
    while (boundary !== -1) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const data = block
        .split("\n")
        .filter((line) => line.startsWith("data:"))
        .map((line) => line.slice(5).replace(/^ /, ""))
        .join("\n");
      if (data.length > 0) {
        payloads.push(data);
      }
      boundary = this.buffer.indexOf("\n\n");
    }
    return payloads;
  }

  /** Flush a trailing event that was not terminated by a blank line. */
  end(): string[] {
    if (this.buffer.length === 0) {
      return [];
    }
    const rest = this.buffer;
    this.buffer = "";
    return this.feed(rest + "\n\n");
  }
}

/**
 * Iterate the data payloads of an SSE response body until the stream
 * closes. The caller decides how to decode each payload.
 */
export async function* readEventPayloads(
  body: ReadableStream<Uint8Array>,
): AsyncGenerator<string, void, undefined> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  const parser = new SseParser();
  try {
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      for (const payload of parser.feed(decoder.decode(value, { stream: true }))) {
        yield payload;
      }
    }
    for (const payload of parser.end()) {
      yield payload;
    }
  } finally {
    reader.releaseLock();
  }
}
