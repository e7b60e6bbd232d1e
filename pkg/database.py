"""
SQLite 실행 기록 관리 모듈
CLI 실행 결과 요약을 SQLite DB에 저장하고 조회하는 기능 제공
"""
import sqlite3
import logging
from datetime import datetime
from typing import Optional, List
from dataclasses import asdict
from models import RunRecord


class ResultsDatabase:
    def __init__(self, db_path: str = "ssl_runs.db"):
        self.db_path = db_path
        self.logger = logging.getLogger(__name__)
        self._init_database()

    def close(self):
        """데이터베이스 연결 정리 (테스트용)"""
        # 호출마다 연결을 열고 닫으므로 정리할 자원 없음
        pass

    def _init_database(self):
        """데이터베이스 초기화 및 테이블 생성"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.execute("""
                    CREATE TABLE IF NOT EXISTS runs (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        timestamp DATETIME NOT NULL,
                        command TEXT NOT NULL,
                        family TEXT NOT NULL,

                        -- 파라미터
                        n_cube INTEGER,
                        m_cycle INTEGER,
                        k_level INTEGER,
                        omega REAL,
                        seed INTEGER,

                        -- 결과
                        status TEXT NOT NULL,
                        exit_code INTEGER NOT NULL,
                        summary TEXT,
                        output_dir TEXT,

                        -- 메타데이터
                        hostname TEXT,
                        toolkit_version TEXT,
                        created_at DATETIME DEFAULT CURRENT_TIMESTAMP
                    )
                """)

                conn.execute("""
                    CREATE INDEX IF NOT EXISTS idx_command_timestamp
                    ON runs(command, timestamp)
                """)

                conn.execute("""
                    CREATE INDEX IF NOT EXISTS idx_family_timestamp
                    ON runs(family, timestamp)
                """)

                conn.commit()
                self.logger.info("SQLite 실행 기록 데이터베이스 초기화 완료")

        except Exception as e:
            self.logger.error(f"데이터베이스 초기화 오류: {e}")
            raise

    def insert_run(self, record: RunRecord) -> Optional[int]:
        """실행 기록을 데이터베이스에 저장"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                data = asdict(record)
                data.pop('id', None)
                data.pop('created_at', None)

                if isinstance(data['timestamp'], datetime):
                    data['timestamp'] = data['timestamp'].isoformat()

                columns = list(data.keys())
                placeholders = ['?' for _ in columns]
                values = list(data.values())

                query = f"""
                    INSERT INTO runs ({', '.join(columns)})
                    VALUES ({', '.join(placeholders)})
                """

                cursor = conn.execute(query, values)
                conn.commit()

                row_id = cursor.lastrowid
                self.logger.debug(f"실행 기록 저장 완료 - ID: {row_id}")
                return row_id

        except Exception as e:
            self.logger.error(f"실행 기록 저장 오류: {e}")
            return None

    def get_recent_runs(self, limit: int = 100) -> List[RunRecord]:
        """최근 실행 기록 조회"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.row_factory = sqlite3.Row
                cursor = conn.execute("""
                    SELECT * FROM runs
                    ORDER BY timestamp DESC, id DESC
                    LIMIT ?
                """, (limit,))

                return [self._row_to_record(row) for row in cursor.fetchall()]

        except Exception as e:
            self.logger.error(f"실행 기록 조회 오류: {e}")
            return []

    def get_runs_by_command(self, command: str, limit: int = 100) -> List[RunRecord]:
        """특정 서브커맨드의 실행 기록 조회"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.row_factory = sqlite3.Row
                cursor = conn.execute("""
                    SELECT * FROM runs
                    WHERE command = ?
                    ORDER BY timestamp DESC, id DESC
                    LIMIT ?
                """, (command, limit))

                return [self._row_to_record(row) for row in cursor.fetchall()]

        except Exception as e:
            self.logger.error(f"커맨드 실행 기록 조회 오류: {e}")
            return []

    def get_statistics(self) -> dict:
        """기본 통계 정보 조회"""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.execute("""
                    SELECT
                        COUNT(*) as total_runs,
                        COUNT(DISTINCT command) as unique_commands,
                        SUM(CASE WHEN exit_code = 0 THEN 1 ELSE 0 END) as successful_runs,
                        MIN(timestamp) as first_run,
                        MAX(timestamp) as last_run
                    FROM runs
                """)
                stats = cursor.fetchone()

                return {
                    'total_runs': stats[0],
                    'unique_commands': stats[1],
                    'successful_runs': stats[2] or 0,
                    'failed_runs': stats[0] - (stats[2] or 0),
                    'first_run': stats[3],
                    'last_run': stats[4]
                }

        except Exception as e:
            self.logger.error(f"통계 조회 오류: {e}")
            return {}

    def _row_to_record(self, row: sqlite3.Row) -> RunRecord:
        """SQLite Row를 RunRecord 객체로 변환"""
        return RunRecord(
            id=row['id'],
            timestamp=datetime.fromisoformat(row['timestamp']) if row['timestamp'] else None,
            command=row['command'],
            family=row['family'],
            n_cube=row['n_cube'],
            m_cycle=row['m_cycle'],
            k_level=row['k_level'],
            omega=row['omega'],
            seed=row['seed'],
            status=row['status'],
            exit_code=row['exit_code'],
            summary=row['summary'],
            output_dir=row['output_dir'],
            hostname=row['hostname'],
            toolkit_version=row['toolkit_version'],
            created_at=datetime.fromisoformat(row['created_at']) if row['created_at'] else None
        )
